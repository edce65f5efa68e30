//! Joint-distribution existence for prescribed moments of ±1 variables.
//!
//! A [`Scenario`] lists mean and product-moment constraints. [`check_joint`]
//! turns it into a linear system over the `2^n` atom weights (one row for
//! normalization, one per constraint) and returns a [`Verdict`] carrying an
//! exact witness distribution or a Bell-type inequality that the prescribed
//! moments violate.

mod closed_form;
mod deterministic;
mod sampling;

pub use closed_form::{
    ghz_epsilon_verdict, ghz_inequalities, suppes_zanotti_check, GhzInequalities, SuppesZanotti,
};
pub use deterministic::{enumerate_deterministic, ghz_deterministic_max, DeterministicAssignments};
pub use sampling::{sample, EmpiricalMoment};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve_feasibility, verify_certificate, FarkasCertificate, Feasibility, LinearSystem};
use crate::outcome::{MomentTerm, VariableSystem};
use crate::rational::{int, integer_scale, to_decimal, to_text, Approximation, Rational};

/// One named constraint of a scenario, in the order used for LP rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub term: MomentTerm,
    pub value: Rational,
    /// `E(X*Y)`-style label.
    pub label: String,
}

/// A variable system plus expectation constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    system: VariableSystem,
    means: Vec<Option<Rational>>,
    moments: Vec<(MomentTerm, Rational)>,
    approximations: Vec<Approximation>,
}

fn check_unit_range(what: &str, value: &Rational) -> Result<()> {
    if value.abs() > Rational::one() {
        return Err(Error::OutOfRange(format!(
            "{what} = {} lies outside [-1, 1]",
            to_text(value)
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn new(system: VariableSystem) -> Self {
        let n = system.len();
        Self {
            system,
            means: vec![None; n],
            moments: Vec::new(),
            approximations: Vec::new(),
        }
    }

    pub fn system(&self) -> &VariableSystem {
        &self.system
    }

    pub fn means(&self) -> &[Option<Rational>] {
        &self.means
    }

    pub fn moments(&self) -> &[(MomentTerm, Rational)] {
        &self.moments
    }

    /// Notes for every value that was rationalized from an irrational input.
    pub fn approximations(&self) -> &[Approximation] {
        &self.approximations
    }

    pub fn add_approximation(&mut self, note: Approximation) {
        self.approximations.push(note);
    }

    fn has_term(&self, term: &MomentTerm) -> bool {
        let single = term.degree() == 1 && self.means[term.positions().next().unwrap()].is_some();
        single || self.moments.iter().any(|(t, _)| t == term)
    }

    pub fn set_mean(&mut self, name: &str, value: Rational) -> Result<()> {
        let pos = self
            .system
            .position(name)
            .ok_or_else(|| Error::Domain(format!("unknown variable {name:?}")))?;
        check_unit_range(&format!("E({name})"), &value)?;
        let term = self.system.variable_term(pos)?;
        if self.has_term(&term) {
            return Err(Error::Domain(format!("duplicate constraint on E({name})")));
        }
        self.means[pos] = Some(value);
        Ok(())
    }

    /// Constrains every variable to mean zero.
    pub fn with_zero_means(mut self) -> Result<Self> {
        let names: Vec<String> = self.system.names().to_vec();
        for name in names {
            self.set_mean(&name, Rational::zero())?;
        }
        Ok(self)
    }

    pub fn add_moment_term(&mut self, term: MomentTerm, value: Rational) -> Result<()> {
        self.system.check_term(&term)?;
        let label = format!("E({})", self.system.term_label(&term));
        check_unit_range(&label, &value)?;
        if self.has_term(&term) {
            return Err(Error::Domain(format!("duplicate constraint on {label}")));
        }
        self.moments.push((term, value));
        Ok(())
    }

    pub fn add_moment<S: AsRef<str>>(&mut self, names: &[S], value: Rational) -> Result<()> {
        let term = self.system.term(names)?;
        self.add_moment_term(term, value)
    }

    /// Means (in variable order) followed by moments (in insertion order).
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for (pos, mean) in self.means.iter().enumerate() {
            if let Some(value) = mean {
                out.push(Constraint {
                    term: self.system.variable_term(pos).expect("position in range"),
                    value: value.clone(),
                    label: format!("E({})", self.system.names()[pos]),
                });
            }
        }
        for (term, value) in &self.moments {
            out.push(Constraint {
                term: *term,
                value: value.clone(),
                label: format!("E({})", self.system.term_label(term)),
            });
        }
        out
    }

    /// Linear system over atom weights: row 0 is normalization, row `k + 1`
    /// is constraint `k` of [`Scenario::constraints`].
    pub fn to_linear_system(&self) -> LinearSystem {
        let atoms = self.system.atom_count();
        let mut sys = LinearSystem::new(atoms);
        sys.push_row(vec![Rational::one(); atoms], Rational::one());
        for c in self.constraints() {
            let coeffs = (0..atoms as u32).map(|bits| int(c.term.eval_bits(bits) as i64)).collect();
            sys.push_row(coeffs, c.value);
        }
        sys
    }
}

/// Nonnegative weights over all atoms of a system, summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    system: VariableSystem,
    weights: Vec<Rational>,
}

impl JointDistribution {
    pub fn new(system: VariableSystem, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != system.atom_count() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for {} atoms",
                weights.len(),
                system.atom_count()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidDistribution(format!(
                "atom {} has negative weight {}",
                system.atom(i as u32)?,
                to_text(w)
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {}, not 1",
                to_text(&total)
            )));
        }
        Ok(Self { system, weights })
    }

    pub fn uniform(system: VariableSystem) -> Self {
        let n = system.atom_count();
        let w = Rational::new(1.into(), (n as i64).into());
        Self {
            weights: vec![w; n],
            system,
        }
    }

    pub fn system(&self) -> &VariableSystem {
        &self.system
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom_index: usize) -> &Rational {
        &self.weights[atom_index]
    }

    /// Atoms with positive weight, in encoding order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }

    pub fn expectation(&self, term: &MomentTerm) -> Result<Rational> {
        self.system.check_term(term)?;
        let mut e = Rational::zero();
        for (bits, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if term.eval_bits(bits as u32) > 0 {
                e += w;
            } else {
                e -= w;
            }
        }
        Ok(e)
    }

    /// Labels of constraints the distribution fails to reproduce exactly.
    pub fn mismatches(&self, scenario: &Scenario) -> Result<Vec<String>> {
        if scenario.system() != &self.system {
            return Err(Error::Domain("witness and scenario use different variable systems".into()));
        }
        let mut bad = Vec::new();
        for c in scenario.constraints() {
            if self.expectation(&c.term)? != c.value {
                bad.push(c.label);
            }
        }
        Ok(bad)
    }

    pub fn reproduces(&self, scenario: &Scenario) -> Result<bool> {
        Ok(self.mismatches(scenario)?.is_empty())
    }
}

/// A Farkas certificate read as an inequality on expectations:
/// `Σ coefficient·E(term) <= bound` holds for every joint distribution,
/// yet the prescribed values give `value > bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellInequality {
    pub terms: Vec<(String, Rational)>,
    pub bound: Rational,
    pub value: Rational,
}

impl BellInequality {
    pub fn violation(&self) -> Rational {
        &self.value - &self.bound
    }

    pub fn render(&self) -> String {
        let mut lhs = String::new();
        for (label, coeff) in self.terms.iter().filter(|(_, c)| !c.is_zero()) {
            let sign = if coeff.is_negative() { "-" } else { "+" };
            let mag = coeff.abs();
            if lhs.is_empty() {
                if coeff.is_negative() {
                    lhs.push('-');
                }
            } else {
                lhs.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                lhs.push_str(&format!("{}*", to_text(&mag)));
            }
            lhs.push_str(label);
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        format!(
            "{lhs} <= {}, violated by value {} (~{})",
            to_text(&self.bound),
            to_text(&self.value),
            to_decimal(&self.value, 12)
        )
    }
}

/// Infeasibility proof for a scenario: the raw certificate over LP rows plus
/// its reading as a violated inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioCertificate {
    /// Integer-normalized; row 0 is normalization, row `k + 1` is constraint `k`.
    pub farkas: FarkasCertificate,
    pub row_labels: Vec<String>,
    pub inequality: BellInequality,
    pub contradiction: String,
}

impl ScenarioCertificate {
    fn from_farkas(scenario: &Scenario, sys: &LinearSystem, cert: FarkasCertificate) -> Result<Self> {
        let farkas = cert.to_integers();
        let constraints = scenario.constraints();
        let mut row_labels = vec!["normalization".to_string()];
        row_labels.extend(constraints.iter().map(|c| c.label.clone()));

        let mut coeffs: Vec<Rational> = farkas.multipliers[1..].iter().map(|l| -l).collect();
        let mut bound = farkas.multipliers[0].clone();
        let scale = integer_scale(&coeffs.iter().cloned().chain([bound.clone()]).collect::<Vec<_>>());
        for c in coeffs.iter_mut() {
            *c *= &scale;
        }
        bound *= &scale;
        let value: Rational = coeffs.iter().zip(&constraints).map(|(k, c)| k * &c.value).sum();
        let terms = constraints
            .iter()
            .zip(coeffs)
            .map(|(c, k)| (c.label.clone(), k))
            .collect();
        let contradiction = farkas.contradiction(sys)?;
        Ok(Self {
            farkas,
            row_labels,
            inequality: BellInequality { terms, bound, value },
            contradiction,
        })
    }

    pub fn verify(&self, scenario: &Scenario) -> Result<bool> {
        verify_certificate(&scenario.to_linear_system(), &self.farkas)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Feasible => "FEASIBLE",
            Status::Infeasible => "INFEASIBLE",
        })
    }
}

/// Which closed-form criterion applies to a scenario, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedForm {
    SuppesZanotti(SuppesZanotti),
    Ghz(GhzInequalities),
}

impl ClosedForm {
    /// Signed distance to the nearest bound; negative when violated.
    pub fn margin(&self) -> Rational {
        match self {
            ClosedForm::SuppesZanotti(sz) => sz.margin(),
            ClosedForm::Ghz(g) => g.margin(),
        }
    }

    pub fn satisfied(&self) -> bool {
        match self {
            ClosedForm::SuppesZanotti(sz) => sz.satisfied,
            ClosedForm::Ghz(g) => g.satisfied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<JointDistribution>,
    pub certificate: Option<ScenarioCertificate>,
    /// Closed-form check, when the scenario has a recognized shape.
    pub closed_form: Option<ClosedForm>,
    pub approximations: Vec<Approximation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    pub fn margin(&self) -> Option<Rational> {
        self.closed_form.as_ref().map(ClosedForm::margin)
    }
}

/// Names of the six GHZ variables in their canonical order.
pub const GHZ_VARIABLES: [&str; 6] = ["X1", "X2", "X3", "Y1", "Y2", "Y3"];

/// The four triple products of the GHZ inequalities, in order
/// `X1Y2Y3, Y1X2Y3, Y1Y2X3, X1X2X3`.
pub const GHZ_TRIPLES: [[&str; 3]; 4] = [
    ["X1", "Y2", "Y3"],
    ["Y1", "X2", "Y3"],
    ["Y1", "Y2", "X3"],
    ["X1", "X2", "X3"],
];

/// Six GHZ variables with zero means and the four triple moments
/// `E(X1Y2Y3), E(Y1X2Y3), E(Y1Y2X3), E(X1X2X3)`.
pub fn ghz_scenario(triples: [Rational; 4]) -> Result<Scenario> {
    let sys = VariableSystem::new(&GHZ_VARIABLES)?;
    let mut s = Scenario::new(sys).with_zero_means()?;
    for (names, value) in GHZ_TRIPLES.iter().zip(triples) {
        s.add_moment(names, value)?;
    }
    Ok(s)
}

/// Triples at `1 - ε`, `E(X1X2X3) = -1 + ε`.
pub fn ghz_epsilon_scenario(epsilon: &Rational) -> Result<Scenario> {
    if epsilon.is_negative() || epsilon > &Rational::one() {
        return Err(Error::OutOfRange(format!("epsilon = {} outside [0, 1]", to_text(epsilon))));
    }
    let t = Rational::one() - epsilon;
    ghz_scenario([t.clone(), t.clone(), t.clone(), -t])
}

/// Symmetric case: triples at `2p - 1`, `E(X1X2X3) = -(2p - 1)`.
pub fn ghz_symmetric_scenario(p: &Rational) -> Result<Scenario> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::OutOfRange(format!("p = {} outside [0, 1]", to_text(p))));
    }
    let t = int(2) * p - int(1);
    ghz_scenario([t.clone(), t.clone(), t.clone(), -t])
}

/// Detects the two shapes with a known closed-form criterion: three
/// zero-mean variables with all pairwise moments, and the six GHZ variables
/// with zero means and the four triples.
pub fn closed_form(scenario: &Scenario) -> Option<ClosedForm> {
    let sys = scenario.system();
    if !scenario.means().iter().all(|m| m.as_ref().is_some_and(Zero::is_zero)) {
        return None;
    }
    let lookup = |names: &[&str]| -> Option<Rational> {
        let term = sys.term(names).ok()?;
        scenario.moments().iter().find(|(t, _)| *t == term).map(|(_, v)| v.clone())
    };
    if sys.len() == 3 && scenario.moments().len() == 3 {
        let n = sys.names();
        let (a, b, c) = (n[0].as_str(), n[1].as_str(), n[2].as_str());
        let exy = lookup(&[a, b])?;
        let eyz = lookup(&[b, c])?;
        let exz = lookup(&[a, c])?;
        return suppes_zanotti_check(&exy, &eyz, &exz).ok().map(ClosedForm::SuppesZanotti);
    }
    if sys.len() == 6
        && scenario.moments().len() == 4
        && GHZ_VARIABLES.iter().all(|v| sys.position(v).is_some())
    {
        let e: Vec<Rational> = GHZ_TRIPLES.iter().map(|t| lookup(t)).collect::<Option<_>>()?;
        return ghz_inequalities(&e[0], &e[1], &e[2], &e[3]).ok().map(ClosedForm::Ghz);
    }
    None
}

/// Decides whether a joint distribution reproducing every constraint exists.
pub fn check_joint(scenario: &Scenario) -> Result<Verdict> {
    let sys = scenario.to_linear_system();
    let closed = closed_form(scenario);
    let approximations = scenario.approximations().to_vec();
    match solve_feasibility(&sys)? {
        Feasibility::Feasible(weights) => {
            let witness = JointDistribution::new(scenario.system().clone(), weights)?;
            debug_assert!(witness.reproduces(scenario).unwrap_or(false));
            Ok(Verdict {
                status: Status::Feasible,
                witness: Some(witness),
                certificate: None,
                closed_form: closed,
                approximations,
            })
        }
        Feasibility::Infeasible(cert) => Ok(Verdict {
            status: Status::Infeasible,
            witness: None,
            certificate: Some(ScenarioCertificate::from_farkas(scenario, &sys, cert)?),
            closed_form: closed,
            approximations,
        }),
    }
}
