//! JSON file formats.
//!
//! Numbers are written as canonical `p/q` strings. On input, strings follow
//! the number grammar of [`crate::rational`] and plain JSON numbers are read
//! through their decimal text. Atoms are `+`/`-` strings in variable order.
//!
//! Scenario:
//! ```json
//! {"variables": ["X", "Y", "Z"],
//!  "means": {"X": "0", "Y": "0", "Z": "0"},
//!  "moments": [{"term": ["X", "Y"], "value": "-sqrt(3)/2"}]}
//! ```
//! A term may also be written `"X*Y"`.
//!
//! Witness: `{"variables": [...], "atoms": {"+-+": "1/2", ...}}` listing only
//! atoms of nonzero weight. Upper assignment:
//! `{"variables": [...], "events": [{"atoms": ["+++", "---"], "value": "1"}]}`.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::joint::{JointDistribution, Scenario, ScenarioCertificate};
use crate::lp::BoundKind;
use crate::outcome::{Event, MomentTerm, VariableSystem};
use crate::rational::{parse_number_with_precision, to_decimal, to_text, ParsedNumber, Rational};
use crate::upper::{AxiomReport, TrackedFamily, UpperAssignment};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, to_pretty(value)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn number_value(r: &Rational) -> Value {
    Value::String(to_text(r))
}

pub fn parse_number_value(v: &Value, digits: u32) -> Result<ParsedNumber> {
    match v {
        Value::String(s) => parse_number_with_precision(s, digits),
        Value::Number(n) => parse_number_with_precision(&n.to_string(), digits),
        other => Err(parse_err(format!("expected a number, found {other}"))),
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what} must be an array")))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| parse_err(format!("{what} entries must be strings")))
        })
        .collect()
}

fn read_system(v: &Value) -> Result<VariableSystem> {
    VariableSystem::new(&string_list(field(v, "variables")?, "variables")?)
}

fn read_term(system: &VariableSystem, v: &Value) -> Result<MomentTerm> {
    let names = match v {
        Value::String(s) => s.split('*').map(|p| p.trim().to_string()).collect(),
        _ => string_list(v, "term")?,
    };
    system.term(&names)
}

fn variables_value(system: &VariableSystem) -> Value {
    json!(system.names())
}

pub fn scenario_from_json(v: &Value, digits: u32) -> Result<Scenario> {
    let system = read_system(v)?;
    let mut s = Scenario::new(system.clone());
    let note = |s: &mut Scenario, p: ParsedNumber| {
        if let Some(a) = p.approximation {
            s.add_approximation(a);
        }
        p.value
    };
    if let Some(means) = v.get("means") {
        let means = means.as_object().ok_or_else(|| parse_err("means must be an object"))?;
        for (name, value) in means {
            let parsed = parse_number_value(value, digits)?;
            let value = note(&mut s, parsed);
            s.set_mean(name, value)?;
        }
    }
    if let Some(moments) = v.get("moments") {
        let moments = moments.as_array().ok_or_else(|| parse_err("moments must be an array"))?;
        for m in moments {
            let term = read_term(&system, field(m, "term")?)?;
            let parsed = parse_number_value(field(m, "value")?, digits)?;
            let value = note(&mut s, parsed);
            s.add_moment_term(term, value)?;
        }
    }
    Ok(s)
}

pub fn scenario_to_json(s: &Scenario) -> Value {
    let sys = s.system();
    let mut means = Map::new();
    for (name, mean) in sys.names().iter().zip(s.means()) {
        if let Some(m) = mean {
            means.insert(name.clone(), number_value(m));
        }
    }
    let moments: Vec<Value> = s
        .moments()
        .iter()
        .map(|(t, v)| json!({"term": sys.term_names(t), "value": number_value(v)}))
        .collect();
    let mut out = Map::new();
    out.insert("variables".into(), variables_value(sys));
    out.insert("means".into(), Value::Object(means));
    out.insert("moments".into(), Value::Array(moments));
    if !s.approximations().is_empty() {
        out.insert("approximations".into(), approximations_value(s.approximations()));
    }
    Value::Object(out)
}

pub fn approximations_value(notes: &[crate::rational::Approximation]) -> Value {
    Value::Array(notes.iter().map(|a| Value::String(a.to_string())).collect())
}

pub fn witness_to_json(w: &JointDistribution) -> Value {
    let sys = w.system();
    let mut atoms = Map::new();
    for i in w.support() {
        let atom = sys.atom(i as u32).expect("index in range");
        atoms.insert(atom.to_string(), number_value(w.weight(i)));
    }
    json!({"variables": variables_value(sys), "atoms": Value::Object(atoms)})
}

/// Reads a witness; atoms not listed get weight zero.
pub fn witness_from_json(v: &Value, digits: u32) -> Result<JointDistribution> {
    let system = read_system(v)?;
    let atoms = field(v, "atoms")?
        .as_object()
        .ok_or_else(|| parse_err("atoms must be an object"))?;
    let mut weights = vec![Rational::from_integer(0.into()); system.atom_count()];
    for (text, value) in atoms {
        let atom = system.parse_atom(text)?;
        weights[atom.index()] = parse_number_value(value, digits)?.value;
    }
    JointDistribution::new(system, weights)
}

pub fn certificate_to_json(s: &Scenario, cert: &ScenarioCertificate) -> Value {
    let multipliers: Vec<Value> = cert
        .row_labels
        .iter()
        .zip(&cert.farkas.multipliers)
        .enumerate()
        .map(|(i, (label, l))| json!({"constraint": i, "label": label, "lambda": number_value(l)}))
        .collect();
    let sys = s.system();
    let bounds: Vec<Value> = cert
        .farkas
        .bound_multipliers
        .iter()
        .map(|b| {
            let atom = sys.atom(b.var as u32).map(|a| a.to_string()).unwrap_or_default();
            let kind = match b.kind {
                BoundKind::Lower => "lower",
                BoundKind::Upper => "upper",
            };
            json!({"atom": atom, "bound": kind, "multiplier": number_value(&b.value)})
        })
        .collect();
    let ineq = &cert.inequality;
    let terms: Vec<Value> = ineq
        .terms
        .iter()
        .map(|(label, c)| json!({"moment": label, "coefficient": number_value(c)}))
        .collect();
    json!({
        "multipliers": multipliers,
        "bound_multipliers": bounds,
        "contradiction": cert.contradiction,
        "inequality": {
            "terms": terms,
            "bound": number_value(&ineq.bound),
            "value": number_value(&ineq.value),
            "value_decimal": to_decimal(&ineq.value, 12),
            "text": ineq.render(),
        },
    })
}

pub fn upper_to_json(a: &UpperAssignment) -> Value {
    let fam = a.family();
    let sys = fam.system();
    let events: Vec<Value> = fam
        .events()
        .iter()
        .zip(a.values())
        .enumerate()
        .map(|(i, (e, v))| {
            let atoms: Vec<String> = e.iter().map(|x| sys.atom(x as u32).expect("in range").to_string()).collect();
            json!({"label": fam.label(i), "atoms": atoms, "value": number_value(v)})
        })
        .collect();
    json!({
        "variables": variables_value(sys),
        "events": events,
        "completion": "untracked events take min(1, sum of their atom values)",
    })
}

pub fn upper_from_json(v: &Value, digits: u32) -> Result<UpperAssignment> {
    let system = read_system(v)?;
    let n = system.atom_count();
    let events = field(v, "events")?
        .as_array()
        .ok_or_else(|| parse_err("events must be an array"))?;
    let mut family = TrackedFamily::empty(system.clone());
    let mut values = Vec::new();
    for (k, e) in events.iter().enumerate() {
        let mut event = Event::empty(n);
        for text in string_list(field(e, "atoms")?, "atoms")? {
            event.insert(system.parse_atom(&text)?.index());
        }
        let label = e
            .get("label")
            .and_then(Value::as_str)
            .map_or_else(|| format!("event#{k}"), str::to_string);
        let value = parse_number_value(field(e, "value")?, digits)?.value;
        let before = family.len();
        let idx = family.insert(event, label)?;
        if idx < before {
            return Err(parse_err(format!("event #{k} duplicates event #{idx}")));
        }
        values.push(value);
    }
    UpperAssignment::new(family, values)
}

pub fn axiom_report_to_json(a: &UpperAssignment, report: &AxiomReport) -> Value {
    let fam = a.family();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let events: Vec<&str> = v.events.iter().map(|&i| fam.label(i)).collect();
            json!({"axiom": v.axiom.to_string(), "events": events, "detail": v.detail})
        })
        .collect();
    json!({"status": if report.ok { "OK" } else { "VIOLATED" }, "violations": violations})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::check_joint;
    use crate::rational::ratio;
    use crate::upper::{construct_ghz_upper, verify_axioms};

    #[test]
    fn scenario_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{"variables": ["X","Y","Z"], "means": {"X": 0, "Y": "0", "Z": "-0"},
                "moments": [{"term": ["X","Y"], "value": "-sqrt(3)/2"},
                            {"term": "Y*Z", "value": -0.5},
                            {"term": ["X","Z"], "value": "−sqrt(3)/2"}]}"#,
        )
        .unwrap();
        let s = scenario_from_json(&v, 30).unwrap();
        assert_eq!(s.approximations().len(), 2);
        assert_eq!(s.moments()[1].1, ratio(-1, 2));
        let back = scenario_from_json(&scenario_to_json(&s), 30).unwrap();
        assert_eq!(back.moments(), s.moments());
        assert_eq!(back.means(), s.means());
    }

    #[test]
    fn bad_scenarios() {
        for text in [
            r#"{"moments": []}"#,
            r#"{"variables": ["X"], "moments": [{"term": ["Q"], "value": 0}]}"#,
            r#"{"variables": ["X"], "moments": [{"term": ["X"], "value": "2/0"}]}"#,
            r#"{"variables": ["X"], "means": {"X": 3}}"#,
        ] {
            let v: Value = serde_json::from_str(text).unwrap();
            assert!(scenario_from_json(&v, 30).is_err(), "{text}");
        }
    }

    #[test]
    fn witness_round_trip() {
        let sys = VariableSystem::new(&["A", "B"]).unwrap();
        let mut s = Scenario::new(sys);
        s.add_moment(&["A", "B"], ratio(1, 3)).unwrap();
        let w = check_joint(&s).unwrap().witness.unwrap();
        let back = witness_from_json(&witness_to_json(&w), 30).unwrap();
        assert_eq!(back, w);
        assert!(back.reproduces(&s).unwrap());
    }

    #[test]
    fn upper_round_trip() {
        let a = construct_ghz_upper();
        let back = upper_from_json(&upper_to_json(&a), 30).unwrap();
        assert_eq!(back.values(), a.values());
        assert!(verify_axioms(&back).ok);
        let v: Value = serde_json::from_str(
            r#"{"variables": ["A"], "events": [{"atoms": [], "value": 0}, {"atoms": ["+", "-"], "value": 1},
               {"atoms": ["+"], "value": "1"}, {"atoms": ["+"], "value": "1"}]}"#,
        )
        .unwrap();
        assert!(upper_from_json(&v, 30).is_err());
    }
}
