//! Symmetric GHZ witnesses built from sixteen weight classes.

use jointprob::ghz::{construct, construct_solution};
use jointprob::rational::{ratio, to_text};

fn main() -> jointprob::Result<()> {
    for p in [ratio(1, 4), ratio(3, 8), ratio(1, 2), ratio(11, 20), ratio(5, 8), ratio(3, 4)] {
        let sol = construct_solution(&p)?;
        let dist = construct(&p)?;
        let classes: Vec<String> = (1..=16)
            .filter(|&k| !num_traits::Zero::is_zero(sol.classes.get(k)))
            .map(|k| format!("a{k}={}", to_text(sol.classes.get(k))))
            .collect();
        println!(
            "p = {:<5} branch {:<4} support {:>2}  {}",
            to_text(&p),
            sol.branch.to_string(),
            dist.support().len(),
            classes.join(" ")
        );
    }
    Ok(())
}
