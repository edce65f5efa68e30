//! Feasibility of the GHZ triples as they move away from perfect correlation.
//!
//! Triples are `1 - ε` and `E(X1X2X3) = -1 + ε`; a joint distribution exists
//! exactly when `ε >= 1/2`.

use jointprob::joint::{check_joint, ghz_epsilon_scenario};
use jointprob::rational::{parse_number, to_text};

fn main() -> jointprob::Result<()> {
    for text in ["0", "1/4", "0.49", "1/2", "0.51", "3/4", "1"] {
        let eps = parse_number(text)?.value;
        let verdict = check_joint(&ghz_epsilon_scenario(&eps)?)?;
        let detail = match &verdict.certificate {
            Some(c) => c.inequality.render(),
            None => format!("witness on {} atoms", verdict.witness.as_ref().map_or(0, |w| w.support().len())),
        };
        println!("eps = {:>5}: {:<10} {detail}", to_text(&eps), verdict.status.to_string());
    }
    Ok(())
}
