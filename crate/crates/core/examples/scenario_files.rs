//! Reading a scenario from JSON and writing back its witness.

use jointprob::io::{scenario_from_json, to_pretty, witness_from_json, witness_to_json};
use jointprob::joint::check_joint;

const SCENARIO: &str = r#"{
  "variables": ["A", "B", "C", "D"],
  "means": {"A": "1/5"},
  "moments": [
    {"term": "A*B", "value": "1/2"},
    {"term": ["B", "C"], "value": -0.25},
    {"term": ["A", "B", "C", "D"], "value": "sqrt(2)/2"}
  ]
}"#;

fn main() -> jointprob::Result<()> {
    let scenario = scenario_from_json(&serde_json::from_str(SCENARIO)?, 30)?;
    let verdict = check_joint(&scenario)?;
    println!("verdict: {}", verdict.status);
    if let Some(w) = verdict.witness {
        let json = witness_to_json(&w);
        print!("{}", to_pretty(&json));
        let back = witness_from_json(&json, 30)?;
        println!("re-read witness reproduces scenario: {}", back.reproduces(&scenario)?);
    }
    Ok(())
}
