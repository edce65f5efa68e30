//! Closed-form existence criteria for two fixed scenario shapes.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{int, ratio, to_text, Rational};

fn in_unit_range(name: &str, v: &Rational) -> Result<()> {
    if v.abs() > Rational::one() {
        return Err(Error::OutOfRange(format!("{name} = {} lies outside [-1, 1]", to_text(v))));
    }
    Ok(())
}

/// Three zero-mean ±1 variables with pairwise correlations admit a joint
/// distribution iff `-1 <= Σ <= 1 + 2·min`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuppesZanotti {
    pub sum: Rational,
    /// `Σ - (-1)`; negative when the lower bound is violated.
    pub lower_slack: Rational,
    /// `1 + 2·min - Σ`; negative when the upper bound is violated.
    pub upper_slack: Rational,
    pub satisfied: bool,
}

impl SuppesZanotti {
    pub fn margin(&self) -> Rational {
        self.lower_slack.clone().min(self.upper_slack.clone())
    }
}

pub fn suppes_zanotti_check(exy: &Rational, eyz: &Rational, exz: &Rational) -> Result<SuppesZanotti> {
    in_unit_range("E(XY)", exy)?;
    in_unit_range("E(YZ)", eyz)?;
    in_unit_range("E(XZ)", exz)?;
    let sum = exy + eyz + exz;
    let min = exy.min(eyz).min(exz).clone();
    let lower_slack = &sum + int(1);
    let upper_slack = int(1) + int(2) * min - &sum;
    let satisfied = !lower_slack.is_negative() && !upper_slack.is_negative();
    Ok(SuppesZanotti {
        sum,
        lower_slack,
        upper_slack,
        satisfied,
    })
}

/// The four signed sums of the GHZ triple correlations; a joint distribution
/// exists iff each lies in `[-2, 2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhzInequalities {
    pub values: [Rational; 4],
    pub satisfied: bool,
}

impl GhzInequalities {
    /// `min_k (2 - |value_k|)`; negative when some inequality fails.
    pub fn margin(&self) -> Rational {
        self.values
            .iter()
            .map(|v| int(2) - v.abs())
            .min()
            .expect("four values")
    }
}

/// Arguments are `E(X1Y2Y3), E(Y1X2Y3), E(Y1Y2X3), E(X1X2X3)`.
pub fn ghz_inequalities(
    e_xyy: &Rational,
    e_yxy: &Rational,
    e_yyx: &Rational,
    e_xxx: &Rational,
) -> Result<GhzInequalities> {
    in_unit_range("E(X1Y2Y3)", e_xyy)?;
    in_unit_range("E(Y1X2Y3)", e_yxy)?;
    in_unit_range("E(Y1Y2X3)", e_yyx)?;
    in_unit_range("E(X1X2X3)", e_xxx)?;
    let values = [
        e_xyy + e_yxy + e_yyx - e_xxx,
        -e_xyy + e_yxy + e_yyx + e_xxx,
        e_xyy - e_yxy + e_yyx + e_xxx,
        e_xyy + e_yxy - e_yyx + e_xxx,
    ];
    let satisfied = values.iter().all(|v| v.abs() <= int(2));
    Ok(GhzInequalities { values, satisfied })
}

/// Triples at `1 - ε` and `E(X1X2X3) = -1 + ε`: a joint distribution
/// exists iff `ε >= 1/2`.
pub fn ghz_epsilon_verdict(epsilon: &Rational) -> Result<bool> {
    if epsilon.is_negative() || epsilon > &Rational::one() {
        return Err(Error::OutOfRange(format!("epsilon = {} outside [0, 1]", to_text(epsilon))));
    }
    let t = int(1) - epsilon;
    let ineq = ghz_inequalities(&t, &t, &t, &-&t)?;
    debug_assert_eq!(ineq.satisfied, epsilon >= &ratio(1, 2));
    Ok(ineq.satisfied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_number;

    #[test]
    fn bell_values_violate_lower_bound() {
        let r3 = parse_number("-sqrt(3)/2").unwrap().value;
        let sz = suppes_zanotti_check(&r3, &ratio(-1, 2), &r3).unwrap();
        assert!(!sz.satisfied);
        assert!(sz.lower_slack.is_negative());
        let approx = crate::rational::to_f64(&sz.sum);
        assert!((approx - (-(3f64.sqrt()) - 0.5)).abs() < 1e-12);
        assert!((approx + 2.2320508).abs() < 1e-7);
    }

    #[test]
    fn sz_trivial_and_boundary() {
        let z = int(0);
        let sz = suppes_zanotti_check(&z, &z, &z).unwrap();
        assert!(sz.satisfied);
        assert_eq!(sz.lower_slack, int(1));
        assert_eq!(sz.upper_slack, int(1));

        let t = ratio(-1, 3);
        let sz = suppes_zanotti_check(&t, &t, &t).unwrap();
        assert!(sz.satisfied);
        assert_eq!(sz.sum, int(-1));
        assert_eq!(sz.lower_slack, int(0));
        assert_eq!(sz.upper_slack, ratio(4, 3));

        assert!(matches!(suppes_zanotti_check(&int(2), &z, &z), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn sz_upper_bound_uses_minimum() {
        // Σ = 1/2 but 1 + 2·min = 1 - 1 = 0.
        let sz = suppes_zanotti_check(&ratio(1, 2), &ratio(1, 2), &ratio(-1, 2)).unwrap();
        assert!(!sz.satisfied);
        assert_eq!(sz.upper_slack, ratio(-1, 2));
    }

    #[test]
    fn ghz_examples() {
        let g = ghz_inequalities(&int(1), &int(1), &int(1), &int(-1)).unwrap();
        assert_eq!(g.values[0], int(4));
        assert!(!g.satisfied);

        let h = ratio(1, 2);
        let g = ghz_inequalities(&h, &h, &h, &-&h).unwrap();
        assert_eq!(g.values[0], int(2));
        assert!(g.satisfied);
        assert_eq!(g.margin(), int(0));

        let z = int(0);
        let g = ghz_inequalities(&z, &z, &z, &z).unwrap();
        assert!(g.values.iter().all(|v| *v == z));
        assert!(g.satisfied);

        assert!(ghz_inequalities(&int(-2), &z, &z, &z).is_err());
    }

    #[test]
    fn epsilon_threshold() {
        assert!(!ghz_epsilon_verdict(&int(0)).unwrap());
        assert!(ghz_epsilon_verdict(&ratio(1, 2)).unwrap());
        assert!(ghz_epsilon_verdict(&int(1)).unwrap());
        assert!(!ghz_epsilon_verdict(&ratio(49, 100)).unwrap());
        assert!(ghz_epsilon_verdict(&ratio(-1, 10)).is_err());
        assert!(ghz_epsilon_verdict(&ratio(11, 10)).is_err());
    }
}
