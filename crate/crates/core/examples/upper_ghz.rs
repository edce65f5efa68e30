//! An upper probability reproducing the perfect GHZ correlations that no
//! ordinary joint distribution can.

use jointprob::joint::check_joint;
use jointprob::joint::Scenario;
use jointprob::rational::{int, to_text};
use jointprob::upper::{construct_ghz_upper, solve_upper, upper_expectation, verify_axioms, UpperOutcome, UpperScenario};

fn main() -> jointprob::Result<()> {
    let assignment = construct_ghz_upper();
    let fam = assignment.family();
    let sys = fam.system().clone();
    for (i, v) in assignment.values().iter().enumerate() {
        println!("P*({}) = {}", fam.label(i), to_text(v));
    }
    let report = verify_axioms(&assignment);
    println!("axioms hold: {} ({} violations)", report.ok, report.violations.len());
    for names in [&["A"][..], &["B"], &["C"], &["A", "B", "C"]] {
        let term = sys.term(names)?;
        println!("E*({}) = {}", sys.term_label(&term), to_text(&upper_expectation(&assignment, &term)?));
    }
    for (small, big) in assignment.nonmonotone_pairs().into_iter().take(3) {
        println!("nonmonotone: {} is inside {} but has larger value", fam.label(small), fam.label(big));
    }

    let mut scenario = Scenario::new(sys);
    for name in ["A", "B", "C"] {
        scenario.add_moment(&[name], int(1))?;
    }
    scenario.add_moment(&["A", "B", "C"], int(-1))?;
    let joint = check_joint(&scenario)?;
    let upper = solve_upper(&UpperScenario::from_scenario(&scenario))?;
    println!("joint distribution: {}", joint.status);
    println!("upper probability: {}", if matches!(upper, UpperOutcome::Feasible(_)) { "FEASIBLE" } else { "INFEASIBLE" });
    Ok(())
}
