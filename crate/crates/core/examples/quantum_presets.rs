//! Spin correlations computed on small statevectors.

use jointprob::io::{scenario_to_json, to_pretty};
use jointprob::quantum::{
    bell_correlation, emit_scenario, expectation, ghz_operators, ghz_state, plus_ghz_state, Preset,
};
use jointprob::rational::ratio;

fn main() -> jointprob::Result<()> {
    for theta in [0.0, 30.0, 60.0, 90.0, 180.0] {
        println!("singlet correlation at {theta:>5} deg: {:+.12}", bell_correlation(theta));
    }
    let names = ["XYY", "YXY", "YYX", "XXX"];
    for (label, psi) in [("(|000> - |111>)/sqrt2", ghz_state()), ("(|001> + |110>)/sqrt2", plus_ghz_state())] {
        let values: Vec<String> = ghz_operators()
            .iter()
            .map(|o| expectation(&psi, o).map(|v| format!("{v:+.0}")))
            .collect::<Result<_, _>>()?;
        let pairs: Vec<String> = names.iter().zip(values).map(|(n, v)| format!("{n}={v}")).collect();
        println!("{label}: {}", pairs.join(" "));
    }
    print!("{}", to_pretty(&scenario_to_json(&emit_scenario(&Preset::Ghz(ratio(1, 4)))?)));
    Ok(())
}
