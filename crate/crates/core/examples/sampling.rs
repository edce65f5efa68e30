//! Seeded draws from a witness distribution.

use jointprob::ghz::construct;
use jointprob::joint::{ghz_symmetric_scenario, sample};
use jointprob::rational::{ratio, to_decimal};

fn main() -> jointprob::Result<()> {
    let p = ratio(1, 2);
    let witness = construct(&p)?;
    let scenario = ghz_symmetric_scenario(&p)?;
    let terms: Vec<_> = scenario.moments().iter().map(|(t, _)| *t).collect();
    for seed in [1, 2] {
        let moments = sample(&witness, &terms, 100_000, seed)?;
        let shown: Vec<String> = moments
            .iter()
            .map(|m| format!("{}={}", scenario.system().term_label(&m.term), to_decimal(&m.value, 4)))
            .collect();
        println!("seed {seed}: {}", shown.join("  "));
    }
    Ok(())
}
