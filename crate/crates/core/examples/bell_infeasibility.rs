//! Three pairwise correlations that no joint distribution can reproduce.
//!
//! Run with `cargo run --example bell_infeasibility`.

use jointprob::joint::check_joint;
use jointprob::quantum::{emit_scenario, Preset};

fn main() -> jointprob::Result<()> {
    let scenario = emit_scenario(&Preset::Bell)?;
    for note in scenario.approximations() {
        println!("note: {note}");
    }
    let verdict = check_joint(&scenario)?;
    println!("verdict: {}", verdict.status);
    if let Some(margin) = verdict.margin() {
        println!("closed-form margin: {}", jointprob::rational::to_decimal(&margin, 12));
    }
    if let Some(cert) = &verdict.certificate {
        println!("certificate verifies: {}", cert.verify(&scenario)?);
        println!("{}", cert.inequality.render());
    }
    Ok(())
}
