//! Where the closed-form high branch stops being a probability vector.

use jointprob::ghz::{construct_solution, closed_form_high};
use jointprob::rational::{ratio, to_text};

fn main() -> jointprob::Result<()> {
    let mut p = ratio(1, 2);
    while p <= ratio(3, 4) {
        let audit = closed_form_high(&p)?;
        let used = construct_solution(&p)?.branch;
        let bad: Vec<String> = audit.violating_classes.iter().map(|k| format!("a{k}")).collect();
        println!(
            "p = {:<6} nonnegative {:<5} equations {:<5} negative [{}]  construct uses {used}",
            to_text(&p),
            audit.nonnegative,
            audit.equations_hold,
            bad.join(",")
        );
        p += ratio(1, 40);
    }
    Ok(())
}
