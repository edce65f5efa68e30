//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use jointprob::ghz::{construct, construct_solution, closed_form_high, closed_form_low, residuals, Branch};
use jointprob::io::{read_json, scenario_from_json};
use jointprob::joint::{
    check_joint, enumerate_deterministic, ghz_deterministic_max, ghz_epsilon_scenario, ghz_inequalities,
    ghz_scenario, ghz_symmetric_scenario, sample, suppes_zanotti_check, ClosedForm, Scenario, Status,
};
use jointprob::lp::verify_certificate;
use jointprob::outcome::{term_event, Event, VariableSystem};
use jointprob::quantum::{bell_correlation, emit_scenario, expectation, ghz_operators, ghz_state, Preset};
use jointprob::rational::{int, parse_number, ratio, tolerance, to_decimal, to_f64, to_text, Rational};
use jointprob::upper::{construct_ghz_upper, solve_upper, upper_expectation, verify_axioms, UpperOutcome, UpperScenario};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BELL_RUNTIME: Duration = Duration::from_secs(1);
const GHZ_THRESHOLD_RUNTIME: Duration = Duration::from_secs(10);
const RANDOM_SCENARIOS: usize = 1000;
const QUANTUM_TOLERANCE: f64 = 1e-12;
const SAMPLE_DRAWS: u64 = 100_000;
const SAMPLE_TOLERANCE: f64 = 0.02;
const SAMPLE_SEED: u64 = 20240601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// Exact test of `|s - sqrt(3)| < bound` for `s > bound`.
fn within_sqrt3(s: &Rational, bound: &Rational) -> bool {
    let lo = s - bound;
    let hi = s + bound;
    lo.is_positive() && &lo * &lo < int(3) && &hi * &hi > int(3)
}

fn bell_scenario() -> Result<Scenario, String> {
    let emitted = emit_scenario(&Preset::Bell).map_err(e)?;
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/bell.json");
    let from_file = scenario_from_json(&read_json(path.as_ref()).map_err(e)?, 30).map_err(e)?;
    ensure(emitted.moments() == from_file.moments(), "preset and data/bell.json disagree")?;
    Ok(emitted)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = bell_scenario()?;
    let m: Vec<Rational> = s.moments().iter().map(|(_, v)| v.clone()).collect();
    let sz = suppes_zanotti_check(&m[0], &m[1], &m[2]).map_err(e)?;
    // sum = -sqrt(3) - 1/2 up to two rationalized terms
    let bound = tolerance(30) * int(2);
    ensure(within_sqrt3(&-(&sz.sum + ratio(1, 2)), &bound), "sum is not -sqrt(3) - 1/2")?;
    ensure(sz.sum < int(-1) && !sz.satisfied, "sum does not violate the lower bound")?;
    let v = check_joint(&s).map_err(e)?;
    ensure(v.status == Status::Infeasible, "check_joint did not return INFEASIBLE")?;
    let cert = v.certificate.ok_or("no certificate")?;
    ensure(verify_certificate(&s.to_linear_system(), &cert.farkas).map_err(e)?, "certificate rejected")?;
    let elapsed = start.elapsed();
    ensure(elapsed < BELL_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("sum ~ {}, {}, {elapsed:.2?}", to_decimal(&sz.sum, 10), cert.inequality.render()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut seen = Vec::new();
    for text in ["0", "1/4", "0.49", "1/2", "0.51", "3/4", "1"] {
        let eps = parse_number(text).map_err(e)?.value;
        let v = check_joint(&ghz_epsilon_scenario(&eps).map_err(e)?).map_err(e)?;
        let expect_feasible = eps >= ratio(1, 2);
        ensure(
            v.is_feasible() == expect_feasible,
            format!("eps = {text}: got {}", v.status),
        )?;
        if let Some(c) = &v.certificate {
            ensure(c.verify(&ghz_epsilon_scenario(&eps).map_err(e)?).map_err(e)?, "certificate rejected")?;
        }
        seen.push(format!("{text}:{}", v.status));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < GHZ_THRESHOLD_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.2?}", seen.join(" ")))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    let d: i64 = rng.gen_range(1..=24);
    ratio(rng.gen_range(-d..=d), d)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = [0usize; 2];
    let mut disagreements = Vec::new();
    for i in 0..RANDOM_SCENARIOS {
        // Alternate between the one-parameter family and four free triples.
        let s = if i % 2 == 0 {
            let t = random_unit(&mut rng);
            ghz_scenario([t.clone(), t.clone(), t.clone(), -t]).map_err(e)?
        } else {
            ghz_scenario(std::array::from_fn(|_| random_unit(&mut rng))).map_err(e)?
        };
        let m: Vec<Rational> = s.moments().iter().map(|(_, v)| v.clone()).collect();
        let g = ghz_inequalities(&m[0], &m[1], &m[2], &m[3]).map_err(e)?;
        let feasible = check_joint(&s).map_err(e)?.is_feasible();
        counts[usize::from(feasible)] += 1;
        if g.satisfied != feasible {
            disagreements.push(format!("GHZ {:?}", m.iter().map(to_text).collect::<Vec<_>>()));
        }
    }
    let sys = VariableSystem::new(&["X", "Y", "Z"]).map_err(e)?;
    let mut sz_counts = [0usize; 2];
    for _ in 0..RANDOM_SCENARIOS {
        let vals: [Rational; 3] = std::array::from_fn(|_| random_unit(&mut rng));
        let mut s = Scenario::new(sys.clone()).with_zero_means().map_err(e)?;
        for (names, v) in [["X", "Y"], ["Y", "Z"], ["X", "Z"]].iter().zip(&vals) {
            s.add_moment(names, v.clone()).map_err(e)?;
        }
        let sz = suppes_zanotti_check(&vals[0], &vals[1], &vals[2]).map_err(e)?;
        let feasible = check_joint(&s).map_err(e)?.is_feasible();
        sz_counts[usize::from(feasible)] += 1;
        if sz.satisfied != feasible {
            disagreements.push(format!("SZ {:?}", vals.iter().map(to_text).collect::<Vec<_>>()));
        }
    }
    if let Some(first) = disagreements.first() {
        return Err(format!("{} disagreements, first {first}", disagreements.len()));
    }
    ensure(counts[0] > 0 && counts[1] > 0 && sz_counts[0] > 0 && sz_counts[1] > 0, "a verdict class was never hit")?;
    Ok(format!(
        "0 disagreements; GHZ {} feasible / {} infeasible, SZ {} / {}",
        counts[1], counts[0], sz_counts[1], sz_counts[0]
    ))
}

fn criterion_4() -> Outcome {
    let sys = VariableSystem::new(&jointprob::joint::GHZ_VARIABLES).map_err(e)?;
    let means = ["X1", "X2", "Y1", "Y2"];
    let mut branches = [0usize; 3];
    for k in 25..=75 {
        let p = ratio(k, 100);
        let t = int(2) * &p - int(1);
        let w = construct(&p).map_err(e)?;
        let mut checks: Vec<(Vec<&str>, Rational)> = means.iter().map(|m| (vec![*m], Rational::zero())).collect();
        checks.push((vec!["X1", "X2", "X3"], -t.clone()));
        checks.push((vec!["X1", "Y2", "Y3"], t.clone()));
        checks.push((vec!["Y1", "X2", "Y3"], t.clone()));
        for (names, want) in checks {
            let got = w.expectation(&sys.term(&names).map_err(e)?).map_err(e)?;
            ensure(got == want, format!("p = {}: E({names:?}) = {}", to_text(&p), to_text(&got)))?;
        }
        let branch = construct_solution(&p).map_err(e)?.branch;
        branches[branch as usize] += 1;
    }
    for p in [ratio(1, 4), ratio(3, 8), ratio(1, 2)] {
        let c = closed_form_low(&p).map_err(e)?;
        ensure(residuals(&p, &c).map_err(e)?.iter().all(Zero::is_zero), format!("low branch residual at {}", to_text(&p)))?;
        ensure(c.negative_classes().is_empty(), "low branch negative")?;
        ensure(c.total_mass() == int(1), "low branch mass")?;
    }
    Ok(format!(
        "51 grid points exact (low {}, high {}, lp {}); low branch exact at 1/4, 3/8, 1/2",
        branches[Branch::Low as usize],
        branches[Branch::High as usize],
        branches[Branch::LinearProgram as usize]
    ))
}

fn criterion_5() -> Outcome {
    let mut negative = Vec::new();
    for k in 50..=75 {
        let p = ratio(k, 100);
        let audit = closed_form_high(&p).map_err(e)?;
        let below = p < ratio(5, 8);
        if below {
            ensure(
                audit.classes.get(5).is_negative() && !audit.nonnegative,
                format!("a5 not negative at p = {}", to_text(&p)),
            )?;
            negative.push(k);
        } else {
            ensure(audit.nonnegative, format!("negative class at p = {}", to_text(&p)))?;
        }
        ensure(audit.equations_hold, format!("high branch misses an equation at {}", to_text(&p)))?;
        construct(&p).map_err(e)?;
    }
    Ok(format!(
        "a5 < 0 on p = {:.2}..{:.2}, nonnegative on [5/8, 3/4]; construct succeeded on all 26 points",
        *negative.first().unwrap() as f64 / 100.0,
        *negative.last().unwrap() as f64 / 100.0
    ))
}

fn criterion_6() -> Outcome {
    let a = construct_ghz_upper();
    let report = verify_axioms(&a);
    ensure(report.ok && report.violations.is_empty(), format!("{} violations", report.violations.len()))?;
    let sys = a.family().system().clone();
    let mut got = Vec::new();
    for names in [&["A"][..], &["B"], &["C"], &["A", "B", "C"]] {
        got.push(upper_expectation(&a, &sys.term(names).map_err(e)?).map_err(e)?);
    }
    ensure(got == vec![int(1), int(1), int(1), int(-1)], "upper expectations differ from (1, 1, 1, -1)")?;

    let mut scenario = Scenario::new(sys.clone());
    for name in ["A", "B", "C"] {
        scenario.add_moment(&[name], int(1)).map_err(e)?;
    }
    scenario.add_moment(&["A", "B", "C"], int(-1)).map_err(e)?;
    ensure(!check_joint(&scenario).map_err(e)?.is_feasible(), "check_joint feasible")?;
    let solved = solve_upper(&UpperScenario::from_scenario(&scenario)).map_err(e)?;
    let UpperOutcome::Feasible(found) = solved else {
        return Err("solve_upper infeasible".into());
    };
    ensure(verify_axioms(&found).ok, "solver output violates axioms")?;

    let n = sys.atom_count();
    let abc = Event::singleton(n, sys.parse_atom("+++").map_err(e)?.index());
    let plus = term_event(&sys, &sys.term(&["A", "B", "C"]).map_err(e)?, 1).map_err(e)?;
    ensure(abc.is_subset(&plus), "abc not inside ABC=+1")?;
    ensure(
        a.value(&abc) == Some(&int(1)) && a.value(&plus) == Some(&int(0)),
        "value({abc}) = 1 > value(ABC=+1) = 0 does not hold",
    )?;
    Ok(format!(
        "0 violations, E* = (1, 1, 1, -1), upper FEASIBLE / joint INFEASIBLE, {} nonmonotone pairs",
        a.nonmonotone_pairs().len()
    ))
}

fn criterion_7() -> Outcome {
    let triples = ghz_scenario([int(1), int(1), int(1), int(-1)]).map_err(e)?;
    let mut only = Scenario::new(triples.system().clone());
    for (t, v) in triples.moments() {
        only.add_moment_term(*t, v.clone()).map_err(e)?;
    }
    let d = enumerate_deterministic(&only).map_err(e)?;
    ensure(d.count == 0, format!("{} assignments satisfy the triples", d.count))?;
    let max = ghz_deterministic_max();
    ensure(max == int(2), format!("maximum is {}", to_text(&max)))?;
    Ok("0 of 64 assignments, maximum GHZ sum exactly 2".into())
}

fn criterion_8() -> Outcome {
    let psi = ghz_state();
    let mut vals = Vec::new();
    for (op, want) in ghz_operators().iter().zip([1.0, 1.0, 1.0, -1.0]) {
        let v = expectation(&psi, op).map_err(e)?;
        ensure((v - want).abs() < QUANTUM_TOLERANCE, format!("GHZ expectation {v} vs {want}"))?;
        vals.push(v);
    }
    let b = bell_correlation(30.0);
    ensure((b + 3f64.sqrt() / 2.0).abs() < QUANTUM_TOLERANCE, format!("bell_correlation(30) = {b}"))?;
    let s = emit_scenario(&Preset::Bell).map_err(e)?;
    ensure(
        (to_f64(&s.moments()[0].1) - b).abs() < QUANTUM_TOLERANCE,
        "emitted E(XY) does not match the statevector",
    )?;
    ensure(!check_joint(&s).map_err(e)?.is_feasible(), "emitted Bell scenario feasible")?;
    ensure(
        matches!(check_joint(&s).map_err(e)?.closed_form, Some(ClosedForm::SuppesZanotti(ref sz)) if !sz.satisfied),
        "closed form not violated",
    )?;
    Ok(format!("GHZ {vals:?}, bell(30) = {b:.12}, Bell preset INFEASIBLE"))
}

fn criterion_9() -> Outcome {
    let p = ratio(1, 2);
    let w = construct(&p).map_err(e)?;
    let s = ghz_symmetric_scenario(&p).map_err(e)?;
    let terms: Vec<_> = s.moments().iter().map(|(t, _)| *t).collect();
    let moments = sample(&w, &terms, SAMPLE_DRAWS, SAMPLE_SEED).map_err(e)?;
    let worst = moments.iter().map(|m| to_f64(&m.value).abs()).fold(0.0, f64::max);
    ensure(worst < SAMPLE_TOLERANCE, format!("largest deviation {worst}"))?;
    Ok(format!("{SAMPLE_DRAWS} draws, largest |triple moment| = {worst:.4}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Bell infeasibility", criterion_1),
        ("2 GHZ epsilon threshold", criterion_2),
        ("3 closed form iff LP", criterion_3),
        ("4 symmetric construction", criterion_4),
        ("5 branch audit", criterion_5),
        ("6 upper-probability separation", criterion_6),
        ("7 deterministic enumeration", criterion_7),
        ("8 quantum oracle", criterion_8),
        ("9 sampler sanity", criterion_9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
