//! Subadditive upper probabilities on a tracked family of events.
//!
//! An upper probability `P*` satisfies `0 <= P*(E) <= 1`, `P*(∅) = 0`,
//! `P*(Ω) = 1`, and `P*(E ∪ F) <= P*(E) + P*(F)` for disjoint `E`, `F`.
//! Monotonicity is not required. Values are only kept on a [`TrackedFamily`]
//! (∅, Ω, every atom, every single-variable event, and the ± events of each
//! constrained product); subadditivity is enforced for every disjoint
//! tracked pair whose union is tracked and for the cover of every tracked
//! event by its atoms.
//!
//! Events outside the family have no stored value. On export they may be
//! completed with `min(1, Σ_{ω ∈ E} P*({ω}))`, see
//! [`UpperAssignment::completed_value`].

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::joint::JointDistribution;
use crate::lp::{solve_feasibility, FarkasCertificate, Feasibility, LinearSystem};
use crate::outcome::{term_event, Event, MomentTerm, VariableSystem};
use crate::rational::{int, to_text, Rational};

/// Largest system [`solve_upper`] accepts.
pub const MAX_UPPER_VARIABLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedFamily {
    system: VariableSystem,
    events: Vec<Event>,
    labels: Vec<String>,
    index: HashMap<Event, usize>,
}

impl TrackedFamily {
    /// A family with no events yet; fill it with [`TrackedFamily::insert`].
    pub fn empty(system: VariableSystem) -> Self {
        Self {
            system,
            events: Vec::new(),
            labels: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Adds `event` unless an equal event is already tracked; returns its index.
    pub fn insert(&mut self, event: Event, label: String) -> Result<usize> {
        if event.space_size() != self.system.atom_count() {
            return Err(Error::Domain("event belongs to a different atom space".into()));
        }
        if let Some(&i) = self.index.get(&event) {
            return Ok(i);
        }
        self.index.insert(event.clone(), self.events.len());
        self.events.push(event);
        self.labels.push(label);
        Ok(self.events.len() - 1)
    }

    /// The mandatory events: ∅, Ω, atoms, and both events of each variable.
    pub fn standard(system: &VariableSystem) -> Self {
        let mut fam = Self::empty(system.clone());
        let n = system.atom_count();
        fam.insert(Event::empty(n), "{}".into()).expect("same space");
        fam.insert(Event::full(n), "Omega".into()).expect("same space");
        for atom in system.atoms() {
            fam.insert(Event::singleton(n, atom.index()), format!("{{{atom}}}"))
                .expect("same space");
        }
        for (pos, name) in system.names().iter().enumerate() {
            for (sign, tag) in [(1, "+1"), (-1, "-1")] {
                let e = system.variable_event(pos, sign).expect("position in range");
                fam.insert(e, format!("{name}={tag}")).expect("same space");
            }
        }
        fam
    }

    /// Standard events plus the ± events of each term.
    pub fn for_terms(system: &VariableSystem, terms: &[MomentTerm]) -> Result<Self> {
        let mut fam = Self::standard(system);
        for term in terms {
            fam.track_term(term)?;
        }
        Ok(fam)
    }

    pub fn track_term(&mut self, term: &MomentTerm) -> Result<()> {
        let label = self.system.term_label(term);
        for (sign, tag) in [(1, "+1"), (-1, "-1")] {
            let e = term_event(&self.system, term, sign)?;
            self.insert(e, format!("{label}={tag}"))?;
        }
        Ok(())
    }

    pub fn system(&self) -> &VariableSystem {
        &self.system
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn position(&self, event: &Event) -> Option<usize> {
        self.index.get(event).copied()
    }

    /// Disjoint tracked pairs `(i, j, k)` with `events[k] = events[i] ∪ events[j]`,
    /// skipping pairs that involve ∅ (those reduce to axiom (ii)).
    pub fn disjoint_unions(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.events.len() {
            if self.events[i].is_empty() {
                continue;
            }
            for j in i + 1..self.events.len() {
                if self.events[j].is_empty() || !self.events[i].is_disjoint(&self.events[j]) {
                    continue;
                }
                if let Some(k) = self.position(&self.events[i].union(&self.events[j])) {
                    out.push((i, j, k));
                }
            }
        }
        out
    }

    /// Indices of the singleton events covering event `i`, if all are tracked.
    fn atom_cover(&self, i: usize) -> Option<Vec<usize>> {
        let n = self.system.atom_count();
        self.events[i]
            .iter()
            .map(|a| self.position(&Event::singleton(n, a)))
            .collect()
    }

    fn require_standard(&self) -> Result<()> {
        let n = self.system.atom_count();
        let missing = |what: &str| Err(Error::Domain(format!("tracked family lacks {what}")));
        if self.position(&Event::empty(n)).is_none() {
            return missing("the empty event");
        }
        if self.position(&Event::full(n)).is_none() {
            return missing("the sure event");
        }
        if let Some(atom) = self.system.atoms().find(|a| self.position(&Event::singleton(n, a.index())).is_none()) {
            return missing(&format!("atom {atom}"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// (i) `0 <= P*(E) <= 1`.
    Range,
    /// (ii) `P*(∅) = 0`.
    EmptyIsZero,
    /// (iii) `P*(Ω) = 1`.
    SureIsOne,
    /// (iv) on a disjoint tracked pair whose union is tracked.
    Subadditive,
    /// (iv) applied to the partition of an event into its atoms.
    AtomCover,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Range => "(i) range",
            Axiom::EmptyIsZero => "(ii) empty set",
            Axiom::SureIsOne => "(iii) sure event",
            Axiom::Subadditive => "(iv) subadditivity",
            Axiom::AtomCover => "(iv) atom cover",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Tracked-event indices involved; the first is the event being bounded.
    pub events: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Rational values on every event of a tracked family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperAssignment {
    family: TrackedFamily,
    values: Vec<Rational>,
}

impl UpperAssignment {
    /// Pairs a family with values. Only shape is checked here; use
    /// [`verify_axioms`] for the axioms.
    pub fn new(family: TrackedFamily, values: Vec<Rational>) -> Result<Self> {
        if values.len() != family.len() {
            return Err(Error::Domain(format!(
                "{} values for {} tracked events",
                values.len(),
                family.len()
            )));
        }
        family.require_standard()?;
        Ok(Self { family, values })
    }

    /// Restriction of an ordinary distribution: `P(E) = Σ_{ω ∈ E} P(ω)`.
    pub fn from_distribution(dist: &JointDistribution, family: TrackedFamily) -> Result<Self> {
        if dist.system() != family.system() {
            return Err(Error::Domain("distribution and family use different systems".into()));
        }
        let values = family
            .events()
            .iter()
            .map(|e| e.iter().map(|a| dist.weight(a)).sum())
            .collect();
        Self::new(family, values)
    }

    pub fn family(&self) -> &TrackedFamily {
        &self.family
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, event: &Event) -> Option<&Rational> {
        self.family.position(event).map(|i| &self.values[i])
    }

    pub fn set_value(&mut self, event: &Event, value: Rational) -> Result<()> {
        let i = self
            .family
            .position(event)
            .ok_or_else(|| Error::Domain("event is not tracked".into()))?;
        self.values[i] = value;
        Ok(())
    }

    /// Stored value when tracked, otherwise `min(1, Σ atom values)`.
    pub fn completed_value(&self, event: &Event) -> Rational {
        if let Some(v) = self.value(event) {
            return v.clone();
        }
        let n = self.family.system().atom_count();
        let sum: Rational = event
            .iter()
            .filter_map(|a| self.value(&Event::singleton(n, a)))
            .sum();
        sum.min(Rational::one())
    }

    /// Pairs `(small, large)` of tracked events with `small ⊂ large` and
    /// `P*(small) > P*(large)`.
    pub fn nonmonotone_pairs(&self) -> Vec<(usize, usize)> {
        let ev = self.family.events();
        let mut out = Vec::new();
        for i in 0..ev.len() {
            for j in 0..ev.len() {
                if i != j && ev[i].is_subset(&ev[j]) && ev[i] != ev[j] && self.values[i] > self.values[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// `E*(t) = P*(t = +1) - P*(t = -1)`.
pub fn upper_expectation(assign: &UpperAssignment, term: &MomentTerm) -> Result<Rational> {
    let sys = assign.family.system();
    let label = sys.term_label(term);
    let lookup = |sign: i8| -> Result<Rational> {
        let e = term_event(sys, term, sign)?;
        assign
            .value(&e)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("events of {label} are not tracked")))
    };
    Ok(lookup(1)? - lookup(-1)?)
}

/// Checks every axiom on the tracked family with exact arithmetic.
pub fn verify_axioms(assign: &UpperAssignment) -> AxiomReport {
    let fam = &assign.family;
    let v = &assign.values;
    let n = fam.system().atom_count();
    let mut violations = Vec::new();

    for (i, value) in v.iter().enumerate() {
        if value.is_negative() || value > &Rational::one() {
            violations.push(Violation {
                axiom: Axiom::Range,
                events: vec![i],
                detail: format!("P*({}) = {} outside [0, 1]", fam.label(i), to_text(value)),
            });
        }
    }
    if let Some(i) = fam.position(&Event::empty(n)) {
        if !v[i].is_zero() {
            violations.push(Violation {
                axiom: Axiom::EmptyIsZero,
                events: vec![i],
                detail: format!("P*(empty) = {}", to_text(&v[i])),
            });
        }
    }
    if let Some(i) = fam.position(&Event::full(n)) {
        if !v[i].is_one() {
            violations.push(Violation {
                axiom: Axiom::SureIsOne,
                events: vec![i],
                detail: format!("P*(Omega) = {}", to_text(&v[i])),
            });
        }
    }
    for (i, j, k) in fam.disjoint_unions() {
        if v[k] > &v[i] + &v[j] {
            violations.push(Violation {
                axiom: Axiom::Subadditive,
                events: vec![k, i, j],
                detail: format!(
                    "P*({}) = {} > P*({}) + P*({}) = {}",
                    fam.label(k),
                    to_text(&v[k]),
                    fam.label(i),
                    fam.label(j),
                    to_text(&(&v[i] + &v[j]))
                ),
            });
        }
    }
    for i in 0..fam.len() {
        if fam.events()[i].len() < 2 {
            continue;
        }
        let Some(cover) = fam.atom_cover(i) else { continue };
        let sum: Rational = cover.iter().map(|&a| &v[a]).sum();
        if v[i] > sum {
            let mut events = vec![i];
            events.extend(&cover);
            violations.push(Violation {
                axiom: Axiom::AtomCover,
                events,
                detail: format!(
                    "P*({}) = {} > sum over its atoms = {}",
                    fam.label(i),
                    to_text(&v[i]),
                    to_text(&sum)
                ),
            });
        }
    }
    AxiomReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Upper-expectation constraints, optionally with pinned event values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperScenario {
    pub system: VariableSystem,
    pub upper_moments: Vec<(MomentTerm, Rational)>,
    /// Events whose upper probability is prescribed outright.
    pub pinned: Vec<(Event, Rational)>,
}

impl UpperScenario {
    pub fn new(system: VariableSystem) -> Self {
        Self {
            system,
            upper_moments: Vec::new(),
            pinned: Vec::new(),
        }
    }

    pub fn add_moment<S: AsRef<str>>(&mut self, names: &[S], value: Rational) -> Result<()> {
        let term = self.system.term(names)?;
        if value.abs() > Rational::one() {
            return Err(Error::OutOfRange(format!(
                "E*({}) = {} outside [-1, 1]",
                self.system.term_label(&term),
                to_text(&value)
            )));
        }
        if self.upper_moments.iter().any(|(t, _)| *t == term) {
            return Err(Error::Domain(format!(
                "duplicate constraint on E*({})",
                self.system.term_label(&term)
            )));
        }
        self.upper_moments.push((term, value));
        Ok(())
    }

    /// Reads the means and moments of an ordinary scenario as upper moments.
    pub fn from_scenario(s: &crate::joint::Scenario) -> Self {
        Self {
            system: s.system().clone(),
            upper_moments: s.constraints().into_iter().map(|c| (c.term, c.value)).collect(),
            pinned: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperOutcome {
    Feasible(UpperAssignment),
    Infeasible {
        certificate: FarkasCertificate,
        /// Label of each LP row, aligned with the certificate's multipliers.
        row_labels: Vec<String>,
    },
}

/// Searches for an upper assignment on the tracked family of `s` meeting
/// every upper expectation and all axiom constraints.
pub fn solve_upper(s: &UpperScenario) -> Result<UpperOutcome> {
    if s.system.len() > MAX_UPPER_VARIABLES {
        return Err(Error::Oversize(format!(
            "{} variables; upper-probability search supports at most {MAX_UPPER_VARIABLES}",
            s.system.len()
        )));
    }
    let terms: Vec<MomentTerm> = s.upper_moments.iter().map(|(t, _)| *t).collect();
    let mut family = TrackedFamily::for_terms(&s.system, &terms)?;
    for (event, value) in &s.pinned {
        if value.is_negative() || value > &Rational::one() {
            return Err(Error::OutOfRange(format!("pinned value {} outside [0, 1]", to_text(value))));
        }
        family.insert(event.clone(), format!("pinned#{}", family.len()))?;
    }

    let m = family.len();
    let unions = family.disjoint_unions();
    let covers: Vec<(usize, Vec<usize>)> = (0..m)
        .filter(|&i| family.events()[i].len() >= 2)
        .filter_map(|i| family.atom_cover(i).map(|c| (i, c)))
        .collect();
    let slack_count = unions.len() + covers.len();
    let width = m + slack_count;
    let mut lp = LinearSystem::new(width);
    let mut labels = Vec::new();
    for j in 0..m {
        lp.set_upper(j, Some(Rational::one()));
    }
    let unit = |j: usize, coeff: i64, row: &mut Vec<Rational>| row[j] += int(coeff);

    let n = s.system.atom_count();
    for (event, value, label) in [
        (Event::empty(n), Rational::zero(), "P*(empty) = 0"),
        (Event::full(n), Rational::one(), "P*(Omega) = 1"),
    ] {
        let mut row = vec![Rational::zero(); width];
        unit(family.position(&event).expect("standard event"), 1, &mut row);
        lp.push_row(row, value);
        labels.push(label.to_string());
    }
    for (term, value) in &s.upper_moments {
        let plus = family.position(&term_event(&s.system, term, 1)?).expect("tracked");
        let minus = family.position(&term_event(&s.system, term, -1)?).expect("tracked");
        let mut row = vec![Rational::zero(); width];
        unit(plus, 1, &mut row);
        unit(minus, -1, &mut row);
        lp.push_row(row, value.clone());
        labels.push(format!("E*({}) = {}", s.system.term_label(term), to_text(value)));
    }
    for (event, value) in &s.pinned {
        let mut row = vec![Rational::zero(); width];
        unit(family.position(event).expect("tracked"), 1, &mut row);
        lp.push_row(row, value.clone());
        labels.push(format!("P*(pinned) = {}", to_text(value)));
    }
    let mut slack = m;
    for &(i, j, k) in &unions {
        // P*(k) - P*(i) - P*(j) + s = 0, s >= 0
        let mut row = vec![Rational::zero(); width];
        unit(k, 1, &mut row);
        unit(i, -1, &mut row);
        unit(j, -1, &mut row);
        unit(slack, 1, &mut row);
        slack += 1;
        lp.push_row(row, Rational::zero());
        labels.push(format!(
            "P*({}) <= P*({}) + P*({})",
            family.label(k),
            family.label(i),
            family.label(j)
        ));
    }
    for (i, cover) in &covers {
        let mut row = vec![Rational::zero(); width];
        unit(*i, 1, &mut row);
        for &a in cover {
            unit(a, -1, &mut row);
        }
        unit(slack, 1, &mut row);
        slack += 1;
        lp.push_row(row, Rational::zero());
        labels.push(format!("P*({}) <= sum of its atoms", family.label(*i)));
    }

    match solve_feasibility(&lp)? {
        Feasibility::Feasible(point) => {
            let values = point[..m].to_vec();
            Ok(UpperOutcome::Feasible(UpperAssignment::new(family, values)?))
        }
        Feasibility::Infeasible(certificate) => Ok(UpperOutcome::Infeasible {
            certificate,
            row_labels: labels,
        }),
    }
}

/// The explicit assignment over `A, B, C` meeting `E*(A) = E*(B) = E*(C) = 1`
/// and `E*(ABC) = -1`: atoms `abc` and `āb̄c̄` get 1, the other atoms 0,
/// `a, b, c` get 1 and their complements 0, the event `ABC = +1` gets 0 and
/// `ABC = -1` gets 1.
pub fn construct_ghz_upper() -> UpperAssignment {
    let sys = VariableSystem::new(&["A", "B", "C"]).expect("three names");
    let abc = sys.term(&["A", "B", "C"]).expect("known names");
    let family = TrackedFamily::for_terms(&sys, &[abc]).expect("valid term");
    let n = sys.atom_count();
    let mut values = vec![Rational::zero(); family.len()];
    let mut set = |e: &Event, v: Rational| {
        values[family.position(e).expect("tracked")] = v;
    };
    set(&Event::full(n), Rational::one());
    for s in ["+++", "---"] {
        let atom = sys.parse_atom(s).expect("valid atom");
        set(&Event::singleton(n, atom.index()), Rational::one());
    }
    for pos in 0..3 {
        set(&sys.variable_event(pos, 1).expect("in range"), Rational::one());
    }
    set(&term_event(&sys, &abc, -1).expect("valid term"), Rational::one());
    UpperAssignment::new(family, values).expect("standard family")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn abc() -> VariableSystem {
        VariableSystem::new(&["A", "B", "C"]).unwrap()
    }

    #[test]
    fn family_contents() {
        let sys = abc();
        let fam = TrackedFamily::for_terms(&sys, &[sys.term(&["A", "B", "C"]).unwrap()]).unwrap();
        // empty, Omega, 8 atoms, 6 variable events, 2 product events
        assert_eq!(fam.len(), 18);
        // Single-variable terms are already tracked.
        let again = TrackedFamily::for_terms(&sys, &[sys.term(&["A"]).unwrap()]).unwrap();
        assert_eq!(again.len(), 16);
        // Only complementary pairs have tracked disjoint unions here.
        assert_eq!(fam.disjoint_unions().len(), 4);
    }

    #[test]
    fn ghz_upper_values() {
        let a = construct_ghz_upper();
        let sys = a.family().system().clone();
        let n = sys.atom_count();
        let atom = |s: &str| Event::singleton(n, sys.parse_atom(s).unwrap().index());
        assert_eq!(a.value(&atom("+++")), Some(&int(1)));
        assert_eq!(a.value(&atom("---")), Some(&int(1)));
        for s in ["-++", "+-+", "++-", "+--", "-+-", "--+"] {
            assert_eq!(a.value(&atom(s)), Some(&int(0)));
        }
        let abc_term = sys.term(&["A", "B", "C"]).unwrap();
        let plus = term_event(&sys, &abc_term, 1).unwrap();
        assert_eq!(a.value(&plus), Some(&int(0)));

        let report = verify_axioms(&a);
        assert!(report.ok, "{:?}", report.violations);

        for name in ["A", "B", "C"] {
            assert_eq!(upper_expectation(&a, &sys.term(&[name]).unwrap()).unwrap(), int(1));
        }
        assert_eq!(upper_expectation(&a, &abc_term).unwrap(), int(-1));
    }

    #[test]
    fn nonmonotone_witness() {
        let a = construct_ghz_upper();
        let sys = a.family().system().clone();
        let n = sys.atom_count();
        let small = Event::singleton(n, sys.parse_atom("+++").unwrap().index());
        let big = term_event(&sys, &sys.term(&["A", "B", "C"]).unwrap(), 1).unwrap();
        assert!(small.is_subset(&big));
        let (i, j) = (a.family().position(&small).unwrap(), a.family().position(&big).unwrap());
        assert!(a.nonmonotone_pairs().contains(&(i, j)));
    }

    #[test]
    fn empty_set_violation() {
        let mut a = construct_ghz_upper();
        let n = a.family().system().atom_count();
        a.set_value(&Event::empty(n), ratio(1, 2)).unwrap();
        let report = verify_axioms(&a);
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.axiom == Axiom::EmptyIsZero));
    }

    #[test]
    fn cover_violation() {
        let mut a = construct_ghz_upper();
        let sys = a.family().system().clone();
        let n = sys.atom_count();
        let bbb = Event::singleton(n, sys.parse_atom("---").unwrap().index());
        a.set_value(&bbb, int(0)).unwrap();
        let report = verify_axioms(&a);
        assert!(!report.ok);
        let minus = term_event(&sys, &sys.term(&["A", "B", "C"]).unwrap(), -1).unwrap();
        let idx = a.family().position(&minus).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::AtomCover && v.events[0] == idx));
    }

    #[test]
    fn untracked_term_is_an_error() {
        let a = construct_ghz_upper();
        let t = a.family().system().term(&["A", "B"]).unwrap();
        assert!(matches!(upper_expectation(&a, &t), Err(Error::Domain(_))));
    }

    #[test]
    fn symmetric_pair_gives_zero() {
        let sys = VariableSystem::new(&["A"]).unwrap();
        let fam = TrackedFamily::standard(&sys);
        // empty, Omega, {-}, {+}; variable events coincide with atoms.
        assert_eq!(fam.len(), 4);
        let a = UpperAssignment::new(fam, vec![int(0), int(1), ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(upper_expectation(&a, &sys.term(&["A"]).unwrap()).unwrap(), int(0));
    }

    #[test]
    fn solve_upper_ghz_constraints() {
        let mut s = UpperScenario::new(abc());
        for name in ["A", "B", "C"] {
            s.add_moment(&[name], int(1)).unwrap();
        }
        s.add_moment(&["A", "B", "C"], int(-1)).unwrap();
        let UpperOutcome::Feasible(a) = solve_upper(&s).unwrap() else {
            panic!("expected feasible");
        };
        assert!(verify_axioms(&a).ok);
        let sys = abc();
        assert_eq!(upper_expectation(&a, &sys.term(&["A", "B", "C"]).unwrap()).unwrap(), int(-1));
    }

    #[test]
    fn pinned_atoms_can_make_it_infeasible() {
        let sys = abc();
        let mut s = UpperScenario::new(sys.clone());
        s.add_moment(&["A"], int(1)).unwrap();
        for atom in sys.atoms() {
            s.pinned.push((Event::singleton(8, atom.index()), int(0)));
        }
        let UpperOutcome::Infeasible { certificate, row_labels } = solve_upper(&s).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(certificate.multipliers.len(), row_labels.len());
    }

    #[test]
    fn oversize_rejected() {
        let names: Vec<String> = (0..9).map(|i| format!("V{i}")).collect();
        let s = UpperScenario::new(VariableSystem::new(&names).unwrap());
        assert!(matches!(solve_upper(&s), Err(Error::Oversize(_))));
    }

    #[test]
    fn completion_rule() {
        let a = construct_ghz_upper();
        let sys = a.family().system().clone();
        let n = sys.atom_count();
        let pair = Event::from_atoms(n, [sys.parse_atom("+++").unwrap().index(), sys.parse_atom("---").unwrap().index()]);
        assert_eq!(a.completed_value(&pair), int(1));
        let zeroes = Event::from_atoms(n, [sys.parse_atom("-++").unwrap().index(), sys.parse_atom("+-+").unwrap().index()]);
        assert_eq!(a.completed_value(&zeroes), int(0));
    }
}
