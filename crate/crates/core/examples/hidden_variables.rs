//! Brute force over deterministic sign assignments.

use jointprob::joint::{enumerate_deterministic, ghz_deterministic_max, ghz_scenario};
use jointprob::rational::{int, to_text};

fn main() -> jointprob::Result<()> {
    let perfect = ghz_scenario([int(1), int(1), int(1), int(-1)])?;
    // Zero means are not ±1, so enumerate against the triples alone.
    let mut triples_only = jointprob::joint::Scenario::new(perfect.system().clone());
    for (term, value) in perfect.moments() {
        triples_only.add_moment_term(*term, value.clone())?;
    }
    let found = enumerate_deterministic(&triples_only)?;
    println!("assignments with triples (1, 1, 1, -1): {}", found.count);

    let mut flipped = jointprob::joint::Scenario::new(perfect.system().clone());
    for (term, _) in perfect.moments() {
        flipped.add_moment_term(*term, int(1))?;
    }
    let found = enumerate_deterministic(&flipped)?;
    println!("assignments with triples (1, 1, 1, 1): {}", found.count);
    for atom in found.assignments.iter().take(4) {
        println!("  {atom}");
    }
    println!("largest GHZ sum over deterministic assignments: {}", to_text(&ghz_deterministic_max()));
    Ok(())
}
