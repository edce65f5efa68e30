//! Enumeration of deterministic (hidden-variable) sign assignments.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::outcome::{Atom, MomentTerm, VariableSystem};
use crate::rational::{int, to_text, Rational};

use super::{ghz_inequalities, Scenario, GHZ_TRIPLES, GHZ_VARIABLES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicAssignments {
    pub count: usize,
    pub assignments: Vec<Atom>,
}

/// Every atom on which each constrained product takes its prescribed value.
///
/// Only meaningful for perfect correlations, so every constraint must be ±1.
pub fn enumerate_deterministic(scenario: &Scenario) -> Result<DeterministicAssignments> {
    let constraints = scenario.constraints();
    let mut targets = Vec::with_capacity(constraints.len());
    for c in &constraints {
        let sign = if c.value.is_one() {
            1
        } else if (-&c.value).is_one() {
            -1
        } else {
            return Err(Error::Unsupported(format!(
                "{} = {} is not ±1; deterministic enumeration needs perfect correlations",
                c.label,
                to_text(&c.value)
            )));
        };
        debug_assert!(!c.value.is_zero());
        targets.push((c.term, sign));
    }
    let assignments: Vec<Atom> = scenario
        .system()
        .atoms()
        .filter(|atom| {
            targets
                .iter()
                .all(|(term, sign)| term.eval_bits(atom.index() as u32) == *sign)
        })
        .collect();
    Ok(DeterministicAssignments {
        count: assignments.len(),
        assignments,
    })
}

/// Largest `|value|` of the four GHZ sums over all 64 deterministic
/// assignments to the six GHZ variables.
pub fn ghz_deterministic_max() -> Rational {
    let sys = VariableSystem::new(&GHZ_VARIABLES).expect("six distinct names");
    let terms: Vec<MomentTerm> = GHZ_TRIPLES.iter().map(|t| sys.term(t).expect("known names")).collect();
    sys.atoms()
        .map(|atom| {
            let e: Vec<Rational> = terms.iter().map(|t| int(t.eval_bits(atom.index() as u32) as i64)).collect();
            let g = ghz_inequalities(&e[0], &e[1], &e[2], &e[3]).expect("values are ±1");
            g.values.iter().map(|v| v.abs()).max().expect("four values")
        })
        .max()
        .expect("64 atoms")
}
