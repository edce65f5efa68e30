//! Command-line front end. [`run`] does all the work and returns what should
//! be printed, so it can be driven from tests without spawning a process.
//!
//! Exit codes: 0 when the command completed (whatever the verdict), 1 for
//! usage and input errors, 2 for internal failures.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ghz::{construct_solution, expand, closed_form_high, SymmetricSolution, NUM_CLASSES};
use crate::io::{
    approximations_value, axiom_report_to_json, certificate_to_json, number_value, parse_number_value,
    read_json, scenario_from_json, scenario_to_json, to_pretty, upper_from_json, upper_to_json, witness_from_json,
    witness_to_json, write_json,
};
use crate::joint::{
    check_joint, closed_form, enumerate_deterministic, ghz_inequalities, sample, suppes_zanotti_check, ClosedForm,
    GhzInequalities, SuppesZanotti,
};
use crate::outcome::MomentTerm;
use crate::quantum::{bell_correlation, emit_scenario_with_precision, expectation, ghz_operators, ghz_state, Preset};
use crate::rational::{parse_number_with_precision, ratio, to_decimal, Rational, DEFAULT_PRECISION_DIGITS};
use crate::upper::{construct_ghz_upper, solve_upper, upper_expectation, verify_axioms, UpperOutcome, UpperScenario};

#[derive(Debug, Parser)]
#[command(name = "jointprob", version, about = "Joint and upper probability feasibility for ±1 variables")]
pub struct Cli {
    /// Decimal digits used when rationalizing square roots.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_DIGITS)]
    pub precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the witness distribution here when one is found.
    #[arg(long, global = true)]
    pub witness_out: Option<PathBuf>,
    /// Write the infeasibility certificate here when one is found.
    #[arg(long, global = true)]
    pub certificate_out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    SuppesZanotti,
    Ghz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    Bell,
    Ghz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a joint distribution reproduces a scenario.
    CheckJoint { scenario: PathBuf },
    /// Evaluate a closed-form criterion from a scenario or inline values.
    Inequality {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Scenario file holding the needed moments.
        scenario: Option<PathBuf>,
        /// Comma-separated values: E(XY),E(YZ),E(XZ) or the four GHZ triples.
        #[arg(long, conflicts_with = "scenario", allow_hyphen_values = true)]
        values: Option<String>,
    },
    /// Build the symmetric GHZ witness at parameter p.
    ConstructSymmetric {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Check the upper-probability axioms on an assignment file.
    UpperCheck { assignment: PathBuf },
    /// Search for an upper-probability assignment meeting a scenario's moments.
    UpperSolve {
        scenario: PathBuf,
        #[arg(long)]
        assignment_out: Option<PathBuf>,
    },
    /// Emit the GHZ upper-probability assignment.
    UpperGhz {
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        assignment_out: Option<PathBuf>,
    },
    /// List sign assignments meeting ±1 constraints exactly.
    EnumerateDeterministic { scenario: PathBuf },
    /// Emit a scenario computed from a quantum state.
    Quantum {
        #[arg(long, value_enum)]
        preset: PresetName,
        /// Deviation ε for the GHZ preset.
        #[arg(long, default_value = "0")]
        epsilon: String,
        /// Write the emitted scenario here.
        #[arg(long)]
        scenario_out: Option<PathBuf>,
    },
    /// Draw samples from a witness and report empirical moments.
    Sample {
        #[arg(long)]
        scenario: PathBuf,
        /// Witness file; computed from the scenario when absent.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Sweep p and report where the closed-form high branch goes negative.
    AuditBranches {
        #[arg(long, default_value = "1/2")]
        from: String,
        #[arg(long, default_value = "3/4")]
        to: String,
        #[arg(long, default_value = "1/100")]
        step: String,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    /// `FEASIBLE`, `INFEASIBLE`, `OK`, ... when the verb has a verdict.
    pub status: Option<String>,
    pub files: Vec<PathBuf>,
}

struct Ctx {
    precision: u32,
    seed: u64,
    witness_out: Option<PathBuf>,
    certificate_out: Option<PathBuf>,
    files: Vec<PathBuf>,
}

impl Ctx {
    fn write(&mut self, path: &Path, value: &Value) -> Result<()> {
        write_json(path, value)?;
        self.files.push(path.to_path_buf());
        Ok(())
    }

    fn number(&self, text: &str) -> Result<Rational> {
        Ok(parse_number_with_precision(text, self.precision)?.value)
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return RunReport { exit_code: code, stdout, stderr, status: None, files: Vec::new() };
        }
    };
    let format = cli.format;
    let mut ctx = Ctx {
        precision: cli.precision,
        seed: cli.seed,
        witness_out: cli.witness_out,
        certificate_out: cli.certificate_out,
        files: Vec::new(),
    };
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli.command, &mut ctx)));
    let elapsed = start.elapsed();
    match outcome {
        Ok(Ok(report)) => {
            let status = report.get("status").and_then(Value::as_str).map(str::to_string);
            let stdout = match format {
                Format::Json => to_pretty(&report),
                Format::Text => render_text(&report),
            };
            RunReport {
                exit_code: 0,
                stdout,
                stderr: format!("elapsed: {:.3} ms\n", elapsed.as_secs_f64() * 1e3),
                status,
                files: ctx.files,
            }
        }
        Ok(Err(e)) => RunReport {
            exit_code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            status: None,
            files: ctx.files,
        },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            RunReport {
                exit_code: 2,
                stdout: String::new(),
                stderr: format!("internal error: {msg}\n"),
                status: None,
                files: ctx.files,
            }
        }
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Value> {
    match cmd {
        Command::CheckJoint { scenario } => cmd_check_joint(scenario, ctx),
        Command::Inequality { kind, scenario, values } => cmd_inequality(*kind, scenario.as_deref(), values.as_deref(), ctx),
        Command::ConstructSymmetric { p } => cmd_construct(p, ctx),
        Command::UpperCheck { assignment } => {
            let a = upper_from_json(&read_json(assignment)?, ctx.precision)?;
            let mut out = axiom_report_to_json(&a, &verify_axioms(&a));
            out["nonmonotone_pairs"] = json!(a.nonmonotone_pairs().len());
            Ok(out)
        }
        Command::UpperSolve { scenario, assignment_out } => cmd_upper_solve(scenario, assignment_out.as_deref(), ctx),
        Command::UpperGhz { verify, assignment_out } => cmd_upper_ghz(*verify, assignment_out.as_deref(), ctx),
        Command::EnumerateDeterministic { scenario } => {
            let s = scenario_from_json(&read_json(scenario)?, ctx.precision)?;
            let d = enumerate_deterministic(&s)?;
            let atoms: Vec<String> = d.assignments.iter().map(|a| a.to_string()).collect();
            Ok(json!({"count": d.count, "assignments": atoms}))
        }
        Command::Quantum { preset, epsilon, scenario_out } => cmd_quantum(*preset, epsilon, scenario_out.as_deref(), ctx),
        Command::Sample { scenario, witness, n } => cmd_sample(scenario, witness.as_deref(), *n, ctx),
        Command::AuditBranches { from, to, step } => cmd_audit(from, to, step, ctx),
    }
}

fn closed_form_value(c: &ClosedForm) -> Value {
    match c {
        ClosedForm::SuppesZanotti(sz) => sz_value(sz),
        ClosedForm::Ghz(g) => ghz_value(g),
    }
}

fn sz_value(sz: &SuppesZanotti) -> Value {
    json!({
        "kind": "suppes-zanotti",
        "sum": number_value(&sz.sum),
        "lower_slack": number_value(&sz.lower_slack),
        "upper_slack": number_value(&sz.upper_slack),
        "margin": number_value(&sz.margin()),
        "satisfied": sz.satisfied,
    })
}

fn ghz_value(g: &GhzInequalities) -> Value {
    let values: Vec<Value> = g.values.iter().map(number_value).collect();
    json!({
        "kind": "ghz",
        "values": values,
        "margin": number_value(&g.margin()),
        "satisfied": g.satisfied,
    })
}

fn cmd_check_joint(path: &Path, ctx: &mut Ctx) -> Result<Value> {
    let s = scenario_from_json(&read_json(path)?, ctx.precision)?;
    let verdict = check_joint(&s)?;
    let mut out = Map::new();
    out.insert("status".into(), json!(verdict.status.to_string()));
    out.insert("constraints".into(), json!(s.constraints().len()));
    out.insert(
        "closed_form".into(),
        verdict.closed_form.as_ref().map_or(Value::Null, closed_form_value),
    );
    out.insert("approximations".into(), approximations_value(&verdict.approximations));
    if let Some(w) = &verdict.witness {
        if !w.reproduces(&s)? {
            panic!("witness does not reproduce the scenario");
        }
        let wj = witness_to_json(w);
        if let Some(p) = ctx.witness_out.clone() {
            ctx.write(&p, &wj)?;
        }
        out.insert("witness".into(), wj);
    }
    if let Some(c) = &verdict.certificate {
        if !c.verify(&s)? {
            panic!("certificate failed verification");
        }
        let cj = certificate_to_json(&s, c);
        if let Some(p) = ctx.certificate_out.clone() {
            ctx.write(&p, &cj)?;
        }
        out.insert("certificate".into(), cj);
    }
    Ok(Value::Object(out))
}

fn cmd_inequality(kind: Kind, scenario: Option<&Path>, values: Option<&str>, ctx: &mut Ctx) -> Result<Value> {
    let vals: Vec<Rational> = match (scenario, values) {
        (Some(path), None) => {
            let s = scenario_from_json(&read_json(path)?, ctx.precision)?;
            match (kind, closed_form(&s)) {
                (Kind::SuppesZanotti, Some(ClosedForm::SuppesZanotti(sz))) => return Ok(sz_value(&sz)),
                (Kind::Ghz, Some(ClosedForm::Ghz(g))) => return Ok(ghz_value(&g)),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "scenario does not have the shape required by --kind {}",
                        kind.to_possible_value().expect("named").get_name()
                    )))
                }
            }
        }
        (None, Some(text)) => text
            .split(',')
            .map(|t| ctx.number(t))
            .collect::<Result<_>>()?,
        _ => return Err(Error::Parse("give either a scenario file or --values".into())),
    };
    match kind {
        Kind::SuppesZanotti => {
            let [a, b, c] = <[Rational; 3]>::try_from(vals)
                .map_err(|_| Error::Parse("suppes-zanotti needs three values".into()))?;
            Ok(sz_value(&suppes_zanotti_check(&a, &b, &c)?))
        }
        Kind::Ghz => {
            let [a, b, c, d] =
                <[Rational; 4]>::try_from(vals).map_err(|_| Error::Parse("ghz needs four values".into()))?;
            Ok(ghz_value(&ghz_inequalities(&a, &b, &c, &d)?))
        }
    }
}

fn solution_value(sol: &SymmetricSolution) -> Value {
    let mut classes = Map::new();
    for k in 1..=NUM_CLASSES {
        classes.insert(format!("a{k}"), number_value(sol.classes.get(k)));
    }
    json!({"p": number_value(&sol.p), "branch": sol.branch.to_string(), "classes": Value::Object(classes)})
}

fn cmd_construct(p: &str, ctx: &mut Ctx) -> Result<Value> {
    let p = ctx.number(p)?;
    let sol = construct_solution(&p)?;
    let witness = expand(&sol.classes)?;
    if !witness.reproduces(&crate::joint::ghz_symmetric_scenario(&p)?)? {
        panic!("symmetric witness misses a moment");
    }
    let mut out = solution_value(&sol);
    let wj = witness_to_json(&witness);
    if let Some(path) = ctx.witness_out.clone() {
        ctx.write(&path, &wj)?;
    }
    out["witness"] = wj;
    Ok(out)
}

fn cmd_upper_solve(path: &Path, out_path: Option<&Path>, ctx: &mut Ctx) -> Result<Value> {
    let s = scenario_from_json(&read_json(path)?, ctx.precision)?;
    let us = UpperScenario::from_scenario(&s);
    match solve_upper(&us)? {
        UpperOutcome::Feasible(a) => {
            let report = verify_axioms(&a);
            if !report.ok {
                panic!("solver output violates the axioms");
            }
            let aj = upper_to_json(&a);
            if let Some(p) = out_path {
                ctx.write(p, &aj)?;
            }
            Ok(json!({"status": "FEASIBLE", "assignment": aj}))
        }
        UpperOutcome::Infeasible { certificate, row_labels } => {
            let cert = certificate.to_integers();
            let multipliers: Vec<Value> = row_labels
                .iter()
                .zip(&cert.multipliers)
                .enumerate()
                .map(|(i, (l, m))| json!({"constraint": i, "label": l, "lambda": number_value(m)}))
                .collect();
            let cj = json!({"multipliers": multipliers});
            if let Some(p) = ctx.certificate_out.clone() {
                ctx.write(&p, &cj)?;
            }
            Ok(json!({"status": "INFEASIBLE", "certificate": cj}))
        }
    }
}

fn cmd_upper_ghz(verify: bool, out_path: Option<&Path>, ctx: &mut Ctx) -> Result<Value> {
    let a = construct_ghz_upper();
    let aj = upper_to_json(&a);
    if let Some(p) = out_path {
        ctx.write(p, &aj)?;
    }
    let sys = a.family().system();
    let mut upper = Map::new();
    for names in [&["A"][..], &["B"], &["C"], &["A", "B", "C"]] {
        let term = sys.term(names)?;
        upper.insert(sys.term_label(&term), number_value(&upper_expectation(&a, &term)?));
    }
    let mut out = Map::new();
    if verify {
        let report = verify_axioms(&a);
        let rj = axiom_report_to_json(&a, &report);
        out.insert("status".into(), rj["status"].clone());
        out.insert("violations".into(), rj["violations"].clone());
        out.insert("nonmonotone_pairs".into(), json!(a.nonmonotone_pairs().len()));
    }
    out.insert("upper_expectations".into(), Value::Object(upper));
    out.insert("assignment".into(), aj);
    Ok(Value::Object(out))
}

fn cmd_quantum(preset: PresetName, epsilon: &str, out_path: Option<&Path>, ctx: &mut Ctx) -> Result<Value> {
    let (preset, computed) = match preset {
        PresetName::Bell => {
            let mut m = Map::new();
            for (label, angle) in [("XY", 30.0), ("YZ", 60.0), ("XZ", 30.0)] {
                m.insert(label.into(), json!(format!("{:.12}", bell_correlation(angle))));
            }
            (Preset::Bell, m)
        }
        PresetName::Ghz => {
            let psi = ghz_state();
            let mut m = Map::new();
            for (label, op) in ["XYY", "YXY", "YYX", "XXX"].iter().zip(ghz_operators()) {
                m.insert((*label).into(), json!(format!("{:.12}", expectation(&psi, &op)?)));
            }
            (Preset::Ghz(ctx.number(epsilon)?), m)
        }
    };
    let s = emit_scenario_with_precision(&preset, ctx.precision)?;
    let sj = scenario_to_json(&s);
    if let Some(p) = out_path {
        ctx.write(p, &sj)?;
    }
    Ok(json!({"statevector": Value::Object(computed), "scenario": sj}))
}

fn cmd_sample(path: &Path, witness: Option<&Path>, n: u64, ctx: &mut Ctx) -> Result<Value> {
    let s = scenario_from_json(&read_json(path)?, ctx.precision)?;
    let w = match witness {
        Some(p) => witness_from_json(&read_json(p)?, ctx.precision)?,
        None => check_joint(&s)?
            .witness
            .ok_or_else(|| Error::Unsupported("scenario is infeasible; nothing to sample".into()))?,
    };
    let constraints = s.constraints();
    let terms: Vec<MomentTerm> = constraints.iter().map(|c| c.term).collect();
    let moments = sample(&w, &terms, n, ctx.seed)?;
    let rows: Vec<Value> = constraints
        .iter()
        .zip(&moments)
        .map(|(c, m)| {
            let exact = w.expectation(&c.term).expect("checked term");
            json!({
                "moment": c.label,
                "empirical": number_value(&m.value),
                "witness": number_value(&exact),
                "deviation": to_decimal(&(&m.value - &exact).abs(), 6),
            })
        })
        .collect();
    Ok(json!({"n": n, "seed": ctx.seed, "moments": rows}))
}

fn cmd_audit(from: &str, to: &str, step: &str, ctx: &mut Ctx) -> Result<Value> {
    let (from, to, step) = (ctx.number(from)?, ctx.number(to)?, ctx.number(step)?);
    if !step.is_positive() || from > to {
        return Err(Error::OutOfRange("need step > 0 and from <= to".into()));
    }
    let mut rows = Vec::new();
    let mut first_bad: Option<Rational> = None;
    let mut last_bad: Option<Rational> = None;
    let mut p = from;
    while p <= to {
        let audit = closed_form_high(&p)?;
        let sol = construct_solution(&p)?;
        if !audit.nonnegative {
            first_bad.get_or_insert_with(|| p.clone());
            last_bad = Some(p.clone());
        }
        rows.push(json!({
            "p": number_value(&p),
            "high_branch_nonnegative": audit.nonnegative,
            "negative_classes": audit.violating_classes.iter().map(|k| format!("a{k}")).collect::<Vec<_>>(),
            "equations_hold": audit.equations_hold,
            "construct_branch": sol.branch.to_string(),
        }));
        p += &step;
    }
    let summary = match (first_bad, last_bad) {
        (Some(a), Some(b)) => json!({"negative_from": number_value(&a), "negative_to": number_value(&b)}),
        _ => Value::Null,
    };
    let nonneg_threshold = ratio(5, 8);
    Ok(json!({
        "high_branch_nonnegative_from": number_value(&nonneg_threshold),
        "negative_range_on_grid": summary,
        "grid": rows,
    }))
}

/// One `key: value` line per scalar, with dotted paths for nesting. Rational
/// strings get a 12-digit decimal rendering alongside.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn walk(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, &join(k), out)),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{path}: [{}]\n", items.join(", ")));
        }
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, &join(&i.to_string()), out)),
        _ => out.push_str(&format!("{path}: {}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => match rational_text(s) {
            Some(r) if !r.is_integer() => format!("{s} (~{})", to_decimal(&r, 12)),
            _ => s.clone(),
        },
        other => other.to_string(),
    }
}

fn rational_text(s: &str) -> Option<Rational> {
    let plain = s.bytes().all(|b| b.is_ascii_digit() || b == b'/' || b == b'-');
    if !plain {
        return None;
    }
    parse_number_value(&Value::String(s.into()), 0).ok().map(|p| p.value)
}
