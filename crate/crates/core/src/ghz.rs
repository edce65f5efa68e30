//! Symmetric reduction of the 64-atom GHZ problem to 16 weight classes.
//!
//! An atom over `X1 X2 X3 Y1 Y2 Y3` is classified by how many of its X
//! values and how many of its Y values are -1. All atoms in a class share a
//! weight, so a distribution is described by 16 numbers `a1..a16` whose
//! class sizes are `(1,1,3,3,3,3,9,9,9,9,3,3,3,3,1,1)`.
//!
//! The symmetric GHZ scenario sets the three triples `X1Y2Y3`, `Y1X2Y3`,
//! `Y1Y2X3` to `2p - 1` and `X1X2X3` to `-(2p - 1)` with zero means. Two
//! closed-form families of class weights are known for it: the low family on
//! `[1/4, 1/2]` and the high family on `[1/2, 3/4]`. The high family goes
//! negative at `a5` for `p < 5/8`, which [`closed_form_high`] reports;
//! [`construct`] falls back to the linear program there.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::joint::{ghz_symmetric_scenario, JointDistribution, GHZ_TRIPLES, GHZ_VARIABLES};
use crate::lp::{solve_feasibility, Feasibility, LinearSystem};
use crate::outcome::{MomentTerm, VariableSystem};
use crate::rational::{int, ratio, to_text, Rational};

pub const NUM_CLASSES: usize = 16;

/// Class sizes `|orbit(a_i)|`.
pub const MULTIPLICITIES: [u32; NUM_CLASSES] = [1, 1, 3, 3, 3, 3, 9, 9, 9, 9, 3, 3, 3, 3, 1, 1];

/// `(number of barred x, number of barred y)` defining each class, in order
/// `a1..a16`.
const CLASS_PATTERNS: [(u32, u32); NUM_CLASSES] = [
    (0, 0),
    (0, 3),
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 3),
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 2),
    (2, 0),
    (2, 3),
    (3, 1),
    (3, 2),
    (3, 0),
    (3, 3),
];

pub fn ghz_system() -> VariableSystem {
    VariableSystem::new(&GHZ_VARIABLES).expect("six distinct names")
}

/// Zero-based class of the atom with encoding `bits` over the GHZ system.
pub fn class_of_atom(bits: u32) -> usize {
    let x_bars = 3 - (bits & 0b000_111).count_ones();
    let y_bars = 3 - (bits & 0b111_000).count_ones();
    CLASS_PATTERNS
        .iter()
        .position(|&p| p == (x_bars, y_bars))
        .expect("every bar pattern has a class")
}

/// Atom indices of every class, generated from the bar patterns.
pub fn orbits() -> &'static [Vec<usize>; NUM_CLASSES] {
    static ORBITS: OnceLock<[Vec<usize>; NUM_CLASSES]> = OnceLock::new();
    ORBITS.get_or_init(|| {
        let mut out: [Vec<usize>; NUM_CLASSES] = Default::default();
        for bits in 0..64u32 {
            out[class_of_atom(bits)].push(bits as usize);
        }
        out
    })
}

/// Weights `a1..a16` (stored zero-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricClasses {
    pub values: [Rational; NUM_CLASSES],
}

impl SymmetricClasses {
    pub fn zero() -> Self {
        Self {
            values: std::array::from_fn(|_| Rational::zero()),
        }
    }

    /// Builds from `(class number, value)` pairs with 1-based class numbers.
    pub fn from_pairs(pairs: &[(usize, Rational)]) -> Self {
        let mut c = Self::zero();
        for (k, v) in pairs {
            c.values[k - 1] = v.clone();
        }
        c
    }

    /// `a_k` with a 1-based index.
    pub fn get(&self, k: usize) -> &Rational {
        &self.values[k - 1]
    }

    /// `Σ multiplicity_i · a_i`.
    pub fn total_mass(&self) -> Rational {
        self.values
            .iter()
            .zip(MULTIPLICITIES)
            .map(|(v, m)| v * int(m as i64))
            .sum()
    }

    /// 1-based indices of negative classes.
    pub fn negative_classes(&self) -> Vec<usize> {
        (0..NUM_CLASSES).filter(|&i| self.values[i].is_negative()).map(|i| i + 1).collect()
    }
}

/// Which route produced a [`SymmetricSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Low,
    High,
    LinearProgram,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Low => "low",
            Branch::High => "high",
            Branch::LinearProgram => "lp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricSolution {
    pub p: Rational,
    pub classes: SymmetricClasses,
    pub branch: Branch,
}

fn check_p(p: &Rational, lo: &Rational, hi: &Rational, what: &str) -> Result<()> {
    if p < lo || p > hi {
        return Err(Error::OutOfRange(format!(
            "p = {} outside {what} [{}, {}]",
            to_text(p),
            to_text(lo),
            to_text(hi)
        )));
    }
    Ok(())
}

/// Per-class coefficient of `E(term)`: the sum of the term's sign over the
/// class's atoms.
fn class_row(term: &MomentTerm) -> Vec<Rational> {
    orbits()
        .iter()
        .map(|atoms| int(atoms.iter().map(|&a| term.eval_bits(a as u32) as i64).sum()))
        .collect()
}

/// The nine-row system over `a1..a16` for the symmetric scenario at `p`:
/// `E(X1)=E(X2)=E(Y1)=E(Y2)=0`, `E(X1X2X3) = -2p + 1`,
/// `E(X1Y2Y3) = E(Y1X2Y3) = 2p - 1`, and normalization; `0 <= a_i <= 1`.
pub fn build_equations(p: &Rational) -> Result<LinearSystem> {
    check_p(p, &int(0), &int(1), "[0, 1]")?;
    let sys = ghz_system();
    let t = int(2) * p - int(1);
    let mut lin = LinearSystem::new(NUM_CLASSES);
    for name in ["X1", "X2", "Y1", "Y2"] {
        lin.push_row(class_row(&sys.term(&[name])?), Rational::zero());
    }
    lin.push_row(class_row(&sys.term(&GHZ_TRIPLES[3])?), -&t);
    lin.push_row(class_row(&sys.term(&GHZ_TRIPLES[0])?), t.clone());
    lin.push_row(class_row(&sys.term(&GHZ_TRIPLES[1])?), t);
    lin.push_row(
        MULTIPLICITIES.iter().map(|&m| int(m as i64)).collect(),
        Rational::one(),
    );
    for j in 0..NUM_CLASSES {
        lin.set_upper(j, Some(Rational::one()));
    }
    Ok(lin)
}

/// Residual `lhs - rhs` of each row of [`build_equations`] at `classes`.
pub fn residuals(p: &Rational, classes: &SymmetricClasses) -> Result<Vec<Rational>> {
    let lin = build_equations(p)?;
    Ok(lin
        .rows()
        .iter()
        .map(|row| {
            let lhs: Rational = row.coeffs.iter().zip(&classes.values).map(|(c, a)| c * a).sum();
            lhs - &row.rhs
        })
        .collect())
}

/// Closed-form classes for `p ∈ [1/4, 1/2]`:
/// `a2 = 2p - 1/2`, `a3 = a12 = 1/4 - p/2`, `a15 = p`, others zero.
pub fn closed_form_low(p: &Rational) -> Result<SymmetricClasses> {
    check_p(p, &ratio(1, 4), &ratio(1, 2), "low branch")?;
    let quarter_minus = ratio(1, 4) - p / int(2);
    Ok(SymmetricClasses::from_pairs(&[
        (2, int(2) * p - ratio(1, 2)),
        (3, quarter_minus.clone()),
        (12, quarter_minus),
        (15, p.clone()),
    ]))
}

/// The closed-form high-branch classes together with a nonnegativity audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighBranchAudit {
    pub classes: SymmetricClasses,
    pub nonnegative: bool,
    /// 1-based indices of classes with negative weight.
    pub violating_classes: Vec<usize>,
    /// Whether every equation of [`build_equations`] holds exactly.
    pub equations_hold: bool,
}

/// Closed-form classes for `p ∈ [1/2, 3/4]`:
/// `a1 = p/2 - 1/8`, `a3 = 3/8 - p/2`, `a5 = p/3 - 5/24`, `a6 = p/6 - 1/24`,
/// `a14 = 1/8`, `a15 = 3/8 - p/2`, others zero.
pub fn closed_form_high(p: &Rational) -> Result<HighBranchAudit> {
    check_p(p, &ratio(1, 2), &ratio(3, 4), "high branch")?;
    let half = p / int(2);
    let classes = SymmetricClasses::from_pairs(&[
        (1, &half - ratio(1, 8)),
        (3, ratio(3, 8) - &half),
        (5, p / int(3) - ratio(5, 24)),
        (6, p / int(6) - ratio(1, 24)),
        (14, ratio(1, 8)),
        (15, ratio(3, 8) - &half),
    ]);
    let violating_classes = classes.negative_classes();
    let equations_hold = residuals(p, &classes)?.iter().all(Zero::is_zero);
    Ok(HighBranchAudit {
        nonnegative: violating_classes.is_empty(),
        violating_classes,
        equations_hold,
        classes,
    })
}

/// Atom weights over the 64 GHZ atoms, replicating each class value across
/// its orbit. No normalization is required.
pub fn expand_weights(classes: &SymmetricClasses) -> Vec<Rational> {
    let mut weights = vec![Rational::zero(); 64];
    for (class, atoms) in orbits().iter().enumerate() {
        for &a in atoms {
            weights[a] = classes.values[class].clone();
        }
    }
    weights
}

/// Expands class weights to a full distribution over the 64 atoms.
pub fn expand(classes: &SymmetricClasses) -> Result<JointDistribution> {
    if let Some(&k) = classes.negative_classes().first() {
        return Err(Error::InvalidDistribution(format!(
            "class a{k} has negative weight {}",
            to_text(classes.get(k))
        )));
    }
    JointDistribution::new(ghz_system(), expand_weights(classes))
}

fn classes_ok(p: &Rational, classes: &SymmetricClasses) -> Result<bool> {
    Ok(classes.negative_classes().is_empty() && residuals(p, classes)?.iter().all(Zero::is_zero))
}

/// Class weights for the symmetric scenario at `p`, preferring the closed
/// forms and falling back to the linear program over [`build_equations`].
pub fn construct_solution(p: &Rational) -> Result<SymmetricSolution> {
    if p < &ratio(1, 4) || p > &ratio(3, 4) {
        return Err(Error::OutOfRange(format!(
            "p = {}: the first GHZ inequality requires 1/4 <= p <= 3/4",
            to_text(p)
        )));
    }
    if p <= &ratio(1, 2) {
        let classes = closed_form_low(p)?;
        if classes_ok(p, &classes)? {
            return Ok(SymmetricSolution {
                p: p.clone(),
                classes,
                branch: Branch::Low,
            });
        }
    }
    if p >= &ratio(1, 2) {
        let audit = closed_form_high(p)?;
        if audit.nonnegative && audit.equations_hold {
            return Ok(SymmetricSolution {
                p: p.clone(),
                classes: audit.classes,
                branch: Branch::High,
            });
        }
    }
    match solve_feasibility(&build_equations(p)?)? {
        Feasibility::Feasible(values) => Ok(SymmetricSolution {
            p: p.clone(),
            classes: SymmetricClasses {
                values: values.try_into().expect("sixteen class values"),
            },
            branch: Branch::LinearProgram,
        }),
        Feasibility::Infeasible(_) => Err(Error::Unsupported(format!(
            "no symmetric class solution at p = {}",
            to_text(p)
        ))),
    }
}

/// A joint distribution over the six GHZ variables reproducing the
/// symmetric scenario at `p`, checked by exact moment recomputation.
pub fn construct(p: &Rational) -> Result<JointDistribution> {
    let solution = construct_solution(p)?;
    let dist = expand(&solution.classes)?;
    let scenario = ghz_symmetric_scenario(p)?;
    let bad = dist.mismatches(&scenario)?;
    if !bad.is_empty() {
        return Err(Error::InvalidDistribution(format!(
            "constructed distribution misses {}",
            bad.join(", ")
        )));
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes_match_multiplicities() {
        let sizes: Vec<u32> = orbits().iter().map(|o| o.len() as u32).collect();
        assert_eq!(sizes, MULTIPLICITIES.to_vec());
        assert_eq!(MULTIPLICITIES.iter().sum::<u32>(), 64);
    }

    #[test]
    fn named_classes() {
        let sys = ghz_system();
        let idx = |s: &str| sys.parse_atom(s).unwrap().index() as u32;
        assert_eq!(class_of_atom(idx("++++++")), 0);
        assert_eq!(class_of_atom(idx("+++---")), 1);
        assert_eq!(class_of_atom(idx("-+++++")), 4);
        assert_eq!(class_of_atom(idx("---+++")), 14);
        assert_eq!(class_of_atom(idx("------")), 15);
        assert_eq!(class_of_atom(idx("-+--++")), 8);
    }

    #[test]
    fn equation_coefficients() {
        let lin = build_equations(&ratio(1, 2)).unwrap();
        assert_eq!(lin.rows().len(), 8);
        assert_eq!(lin.rows()[7].coeffs[6], int(9));
        assert_eq!(lin.rows()[0].coeffs[8], int(-3));
        let rhs: Vec<Rational> = lin.rows().iter().map(|r| r.rhs.clone()).collect();
        let mut expected = vec![int(0); 7];
        expected.push(int(1));
        assert_eq!(rhs, expected);
        let rhs = build_equations(&ratio(3, 4)).unwrap();
        assert_eq!(rhs.rows()[4].rhs, ratio(-1, 2));
        assert_eq!(rhs.rows()[5].rhs, ratio(1, 2));
        assert!(build_equations(&ratio(5, 4)).is_err());
    }

    #[test]
    fn rows_match_known_equations() {
        // E(X1)=0, the X1X2X3 row and normalization, written out by hand.
        let lin = build_equations(&ratio(1, 2)).unwrap();
        let ex1 = [1, 1, 3, 3, 1, 1, 3, 3, -3, -3, -1, -1, -3, -3, -1, -1];
        let exxx = [1, 1, 3, 3, -3, -3, -9, -9, 9, 9, 3, 3, -3, -3, -1, -1];
        let exyy = [1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1];
        let ey = [1, -1, 1, -1, 3, -3, 3, -3, 3, -3, 3, -3, 1, -1, 1, -1];
        let as_rats = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(lin.rows()[0].coeffs, as_rats(&ex1));
        assert_eq!(lin.rows()[2].coeffs, as_rats(&ey));
        assert_eq!(lin.rows()[4].coeffs, as_rats(&exxx));
        assert_eq!(lin.rows()[5].coeffs, as_rats(&exyy));
    }

    #[test]
    fn low_branch_values() {
        let c = closed_form_low(&ratio(1, 4)).unwrap();
        assert_eq!(c.get(2), &int(0));
        assert_eq!(c.get(3), &ratio(1, 8));
        assert_eq!(c.get(12), &ratio(1, 8));
        assert_eq!(c.get(15), &ratio(1, 4));

        let c = closed_form_low(&ratio(1, 2)).unwrap();
        assert_eq!(c.get(2), &ratio(1, 2));
        assert_eq!(c.get(3), &int(0));
        assert_eq!(c.get(15), &ratio(1, 2));

        assert_eq!(closed_form_low(&ratio(3, 8)).unwrap().total_mass(), int(1));
        assert!(closed_form_low(&ratio(3, 5)).is_err());
    }

    #[test]
    fn high_branch_audit() {
        let a = closed_form_high(&ratio(3, 4)).unwrap();
        assert!(a.nonnegative);
        assert!(a.equations_hold);
        assert_eq!(a.classes.get(1), &ratio(1, 4));
        assert_eq!(a.classes.get(3), &int(0));
        assert_eq!(a.classes.get(5), &ratio(1, 24));
        assert_eq!(a.classes.get(6), &ratio(1, 12));
        assert_eq!(a.classes.get(14), &ratio(1, 8));
        assert_eq!(a.classes.get(15), &int(0));

        let a = closed_form_high(&ratio(1, 2)).unwrap();
        assert_eq!(a.classes.get(5), &ratio(-1, 24));
        assert!(!a.nonnegative);
        assert_eq!(a.violating_classes, vec![5]);

        let a = closed_form_high(&ratio(5, 8)).unwrap();
        assert_eq!(a.classes.get(5), &int(0));
        assert!(a.nonnegative);

        assert!(closed_form_high(&ratio(1, 4)).is_err());
    }

    #[test]
    fn expand_examples() {
        let d = expand(&SymmetricClasses::from_pairs(&[(1, int(1))])).unwrap();
        assert_eq!(d.support(), vec![63]);

        let w = ratio(1, 7);
        let weights = expand_weights(&SymmetricClasses::from_pairs(&[(7, w.clone())]));
        assert_eq!(weights.iter().filter(|x| **x == w).count(), 9);

        let low = closed_form_low(&ratio(1, 4)).unwrap();
        assert_eq!(expand_weights(&low).iter().sum::<Rational>(), int(1));

        let neg = SymmetricClasses::from_pairs(&[(1, int(2)), (2, int(-1))]);
        assert!(matches!(expand(&neg), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn construct_examples() {
        let d = construct(&ratio(1, 2)).unwrap();
        let sys = ghz_system();
        let support: Vec<String> = d.support().iter().map(|&i| sys.atom(i as u32).unwrap().to_string()).collect();
        assert_eq!(support, vec!["+++---", "---+++"]);
        assert!(d.support().iter().all(|&i| d.weight(i) == &ratio(1, 2)));

        assert!(matches!(construct(&ratio(1, 5)), Err(Error::OutOfRange(_))));

        let s = construct_solution(&ratio(11, 20)).unwrap();
        assert_eq!(s.branch, Branch::LinearProgram);
        assert!(construct(&ratio(11, 20)).is_ok());
        assert_eq!(construct_solution(&ratio(3, 4)).unwrap().branch, Branch::High);
        assert_eq!(construct_solution(&ratio(3, 10)).unwrap().branch, Branch::Low);
    }
}
