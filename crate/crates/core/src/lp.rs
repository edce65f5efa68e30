//! Exact linear feasibility over the rationals.
//!
//! A [`LinearSystem`] is a set of equality rows `A x = b` plus per-variable
//! bounds `l_j <= x_j <= u_j` (lower bounds always present, upper bounds
//! optional). [`solve_feasibility`] runs a phase-1 simplex with Bland's
//! smallest-index rule, so it cannot cycle, and returns either a point that
//! satisfies every row and bound exactly or a [`FarkasCertificate`].
//!
//! A certificate holds a free multiplier `λ_i` per row and nonnegative
//! multipliers `α_j` / `β_j` on lower / upper bounds with
//! `Aᵀλ = α - β`. For any `x` within the bounds this gives
//! `λᵀb = Σ α_j x_j - Σ β_j x_j >= Σ α_j l_j - Σ β_j u_j`, so the system is
//! infeasible whenever `gap = Σ α_j l_j - Σ β_j u_j - λᵀb` is positive.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{integer_scale, to_text, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    rows: Vec<EqRow>,
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

impl LinearSystem {
    /// `num_vars` variables, each bounded below by zero and unbounded above.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            lower: vec![Rational::zero(); num_vars],
            upper: vec![None; num_vars],
        }
    }

    /// Appends a row. Length is checked lazily by [`LinearSystem::validate`]
    /// so that malformed systems can still be represented and rejected.
    pub fn push_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> usize {
        self.rows.push(EqRow { coeffs, rhs });
        self.rows.len() - 1
    }

    pub fn set_lower(&mut self, var: usize, value: Rational) {
        self.lower[var] = value;
    }

    pub fn set_upper(&mut self, var: usize, value: Option<Rational>) {
        self.upper[var] = value;
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[EqRow] {
        &self.rows
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<Rational>] {
        &self.upper
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.num_vars || self.upper.len() != self.num_vars {
            return Err(Error::Structure("bound vectors do not match variable count".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(Error::Structure(format!(
                    "row {i} has {} coefficients, expected {}",
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// True when `point` satisfies every row and bound exactly.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        let bounds_ok = point.iter().enumerate().all(|(j, x)| {
            x >= &self.lower[j] && self.upper[j].as_ref().is_none_or(|u| x <= u)
        });
        bounds_ok
            && self.rows.iter().all(|row| {
                let lhs: Rational = row
                    .coeffs
                    .iter()
                    .zip(point)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, x)| c * x)
                    .sum();
                lhs == row.rhs
            })
    }
}

/// Which side of a variable's box a bound multiplier applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundMultiplier {
    pub var: usize,
    pub kind: BoundKind,
    pub value: Rational,
}

/// Dual multipliers proving a [`LinearSystem`] infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    /// One free multiplier per equality row.
    pub multipliers: Vec<Rational>,
    /// Nonzero, nonnegative multipliers on active bounds.
    pub bound_multipliers: Vec<BoundMultiplier>,
}

impl FarkasCertificate {
    /// `Σ α_j l_j - Σ β_j u_j - λᵀb`; positive for a valid certificate.
    pub fn gap(&self, sys: &LinearSystem) -> Result<Rational> {
        check_dims(sys, self)?;
        let mut gap: Rational = -self
            .multipliers
            .iter()
            .zip(sys.rows())
            .map(|(l, r)| l * &r.rhs)
            .sum::<Rational>();
        for bm in &self.bound_multipliers {
            match bm.kind {
                BoundKind::Lower => gap += &bm.value * &sys.lower[bm.var],
                BoundKind::Upper => {
                    let u = sys.upper[bm.var].as_ref().ok_or_else(|| {
                        Error::Structure(format!("variable {} has no upper bound", bm.var))
                    })?;
                    gap -= &bm.value * u;
                }
            }
        }
        Ok(gap)
    }

    /// Rescales all multipliers by the same positive factor so that they
    /// become coprime integers. Validity is preserved.
    pub fn to_integers(&self) -> FarkasCertificate {
        let all: Vec<Rational> = self
            .multipliers
            .iter()
            .cloned()
            .chain(self.bound_multipliers.iter().map(|b| b.value.clone()))
            .collect();
        let scale = integer_scale(&all);
        FarkasCertificate {
            multipliers: self.multipliers.iter().map(|m| m * &scale).collect(),
            bound_multipliers: self
                .bound_multipliers
                .iter()
                .map(|b| BoundMultiplier {
                    value: &b.value * &scale,
                    ..b.clone()
                })
                .collect(),
        }
    }

    /// Human-readable statement of the contradiction the certificate derives:
    /// a nonnegative combination of bound slacks equal to `-gap`.
    pub fn contradiction(&self, sys: &LinearSystem) -> Result<String> {
        let gap = self.gap(sys)?;
        let lhs = if self.bound_multipliers.is_empty() {
            "0".to_string()
        } else {
            self.bound_multipliers
                .iter()
                .map(|b| match b.kind {
                    BoundKind::Lower => format!("{}*(x{} - lower)", to_text(&b.value), b.var),
                    BoundKind::Upper => format!("{}*(upper - x{})", to_text(&b.value), b.var),
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        Ok(format!("{lhs} = {}", to_text(&-gap)))
    }
}

fn check_dims(sys: &LinearSystem, cert: &FarkasCertificate) -> Result<()> {
    sys.validate()?;
    if cert.multipliers.len() != sys.rows.len() {
        return Err(Error::Structure(format!(
            "certificate has {} row multipliers, system has {} rows",
            cert.multipliers.len(),
            sys.rows.len()
        )));
    }
    if let Some(bm) = cert.bound_multipliers.iter().find(|b| b.var >= sys.num_vars) {
        return Err(Error::Structure(format!(
            "bound multiplier refers to variable {} of {}",
            bm.var, sys.num_vars
        )));
    }
    Ok(())
}

/// Replays a certificate against a system with exact arithmetic.
///
/// Returns `Ok(true)` only if every bound multiplier is nonnegative, upper
/// multipliers sit on variables that have an upper bound, `Aᵀλ = α - β`
/// holds coefficient by coefficient, and the resulting gap is positive.
pub fn verify_certificate(sys: &LinearSystem, cert: &FarkasCertificate) -> Result<bool> {
    check_dims(sys, cert)?;
    let mut residual = vec![Rational::zero(); sys.num_vars];
    for (lambda, row) in cert.multipliers.iter().zip(sys.rows()) {
        if lambda.is_zero() {
            continue;
        }
        for (r, c) in residual.iter_mut().zip(&row.coeffs) {
            if !c.is_zero() {
                *r += lambda * c;
            }
        }
    }
    for bm in &cert.bound_multipliers {
        if bm.value.is_negative() {
            return Ok(false);
        }
        match bm.kind {
            BoundKind::Lower => residual[bm.var] -= &bm.value,
            BoundKind::Upper => {
                if sys.upper[bm.var].is_none() {
                    return Ok(false);
                }
                residual[bm.var] += &bm.value;
            }
        }
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return Ok(false);
    }
    Ok(cert.gap(sys)?.is_positive())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides feasibility of `sys` exactly.
pub fn solve_feasibility(sys: &LinearSystem) -> Result<Feasibility> {
    sys.validate()?;
    let mut tableau = Tableau::phase_one(sys);
    tableau.run();
    Ok(tableau.outcome(sys))
}

/// Dense phase-1 tableau over shifted variables `z = x - l`.
///
/// Columns: `n` shifted variables, one slack per upper bound, one artificial
/// per row. Rows: the equality rows followed by `z_j + s_j = u_j - l_j` for
/// each upper-bounded variable. Rows are sign-flipped so every rhs is >= 0.
struct Tableau {
    n: usize,
    uppers: Vec<usize>,
    flip: Vec<bool>,
    cells: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    objective: Rational,
}

impl Tableau {
    fn phase_one(sys: &LinearSystem) -> Self {
        let n = sys.num_vars;
        let uppers: Vec<usize> = (0..n).filter(|&j| sys.upper[j].is_some()).collect();
        let m = sys.rows.len() + uppers.len();
        let width = n + uppers.len() + m;
        let art0 = n + uppers.len();

        let mut cells = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for row in &sys.rows {
            let shift: Rational = row
                .coeffs
                .iter()
                .zip(&sys.lower)
                .filter(|(c, l)| !c.is_zero() && !l.is_zero())
                .map(|(c, l)| c * l)
                .sum();
            let mut line = vec![Rational::zero(); width];
            line[..n].clone_from_slice(&row.coeffs);
            cells.push(line);
            rhs.push(&row.rhs - shift);
        }
        for (k, &j) in uppers.iter().enumerate() {
            let mut line = vec![Rational::zero(); width];
            line[j] = Rational::one();
            line[n + k] = Rational::one();
            cells.push(line);
            rhs.push(sys.upper[j].as_ref().unwrap() - &sys.lower[j]);
        }

        let mut flip = vec![false; m];
        for i in 0..m {
            if rhs[i].is_negative() {
                flip[i] = true;
                rhs[i] = -&rhs[i];
                for c in cells[i].iter_mut().take(art0) {
                    if !c.is_zero() {
                        *c = -&*c;
                    }
                }
            }
            cells[i][art0 + i] = Rational::one();
        }

        // Reduced costs for minimizing the sum of artificials.
        let mut cost = vec![Rational::zero(); width];
        for j in 0..art0 {
            let s: Rational = cells.iter().map(|r| &r[j]).filter(|c| !c.is_zero()).sum();
            cost[j] = -s;
        }
        let objective = rhs.iter().sum();
        let basis = (art0..art0 + m).collect();

        Self {
            n,
            uppers,
            flip,
            cells,
            rhs,
            basis,
            cost,
            objective,
        }
    }

    fn artificial_start(&self) -> usize {
        self.n + self.uppers.len()
    }

    fn run(&mut self) {
        let art0 = self.artificial_start();
        while self.objective.is_positive() {
            // Bland: lowest-index improving column, artificials never re-enter.
            let Some(enter) = (0..art0).find(|&j| self.cost[j].is_negative()) else {
                return;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.cells.len() {
                let a = &self.cells[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // The phase-1 objective is bounded below by zero, so some row
            // always limits the step.
            let (row, _) = leave.expect("phase-1 simplex cannot be unbounded");
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.cells[row][col].clone();
        if !pivot.is_one() {
            for c in self.cells[row].iter_mut() {
                if !c.is_zero() {
                    *c /= &pivot;
                }
            }
            self.rhs[row] /= &pivot;
        }
        let pivot_row = self.cells[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();

        for i in 0..self.cells.len() {
            if i == row {
                continue;
            }
            let factor = self.cells[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.cells[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for &j in &nonzero {
                let delta = &factor * &pivot_row[j];
                self.cost[j] -= delta;
            }
            self.objective += &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn outcome(&self, sys: &LinearSystem) -> Feasibility {
        if self.objective.is_zero() {
            let mut point = sys.lower.clone();
            for (i, &b) in self.basis.iter().enumerate() {
                if b < self.n {
                    point[b] += &self.rhs[i];
                }
            }
            return Feasibility::Feasible(point);
        }

        // Duals of the flipped rows: y_i = 1 - reduced cost of artificial i.
        // The Farkas multipliers for the original rows are λ = -y unflipped.
        let art0 = self.artificial_start();
        let m_eq = sys.rows.len();
        let lambda: Vec<Rational> = (0..self.cells.len())
            .map(|i| {
                let y = Rational::one() - &self.cost[art0 + i];
                if self.flip[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        let multipliers = lambda[..m_eq].to_vec();

        let mut combined = vec![Rational::zero(); self.n];
        for (l, row) in multipliers.iter().zip(&sys.rows) {
            if l.is_zero() {
                continue;
            }
            for (c, a) in combined.iter_mut().zip(&row.coeffs) {
                if !a.is_zero() {
                    *c += l * a;
                }
            }
        }
        let mut bound_multipliers = Vec::new();
        let mut upper_mult = vec![Rational::zero(); self.n];
        for (k, &j) in self.uppers.iter().enumerate() {
            upper_mult[j] = lambda[m_eq + k].clone();
        }
        for j in 0..self.n {
            // α_j - β_j = (Aᵀλ)_j with β_j the upper-row multiplier.
            let alpha = &combined[j] + &upper_mult[j];
            if !alpha.is_zero() {
                bound_multipliers.push(BoundMultiplier {
                    var: j,
                    kind: BoundKind::Lower,
                    value: alpha,
                });
            }
            if !upper_mult[j].is_zero() {
                bound_multipliers.push(BoundMultiplier {
                    var: j,
                    kind: BoundKind::Upper,
                    value: upper_mult[j].clone(),
                });
            }
        }
        Feasibility::Infeasible(FarkasCertificate {
            multipliers,
            bound_multipliers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn row(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn simple_feasible() {
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(1));
        match solve_feasibility(&sys).unwrap() {
            Feasibility::Feasible(x) => assert!(sys.is_satisfied_by(&x)),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_rows() {
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(1));
        sys.push_row(row(&[1, 1]), int(2));
        let Feasibility::Infeasible(cert) = solve_feasibility(&sys).unwrap() else {
            panic!("expected infeasible");
        };
        assert_eq!(cert.multipliers, vec![int(1), int(-1)]);
        assert!(cert.bound_multipliers.is_empty());
        assert!(verify_certificate(&sys, &cert).unwrap());
        assert_eq!(cert.contradiction(&sys).unwrap(), "0 = -1");
    }

    #[test]
    fn zero_certificate_is_rejected() {
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(1));
        sys.push_row(row(&[1, 1]), int(2));
        let zero = FarkasCertificate {
            multipliers: vec![int(0), int(0)],
            bound_multipliers: vec![],
        };
        assert!(!verify_certificate(&sys, &zero).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(1));
        let cert = FarkasCertificate {
            multipliers: vec![],
            bound_multipliers: vec![],
        };
        assert!(matches!(verify_certificate(&sys, &cert), Err(Error::Structure(_))));

        let mut bad = LinearSystem::new(3);
        bad.push_row(row(&[1, 1]), int(1));
        assert!(matches!(solve_feasibility(&bad), Err(Error::Structure(_))));
    }

    #[test]
    fn negative_requirement_uses_lower_bound() {
        // x0 + x1 = -1 with x >= 0.
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(-1));
        let Feasibility::Infeasible(cert) = solve_feasibility(&sys).unwrap() else {
            panic!("expected infeasible");
        };
        assert!(verify_certificate(&sys, &cert).unwrap());
        assert!(cert.bound_multipliers.iter().all(|b| b.kind == BoundKind::Lower));
    }

    #[test]
    fn upper_bounds_respected() {
        // x0 + x1 = 3 with x <= 1: infeasible only through upper bounds.
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, 1]), int(3));
        sys.set_upper(0, Some(int(1)));
        sys.set_upper(1, Some(int(1)));
        let Feasibility::Infeasible(cert) = solve_feasibility(&sys).unwrap() else {
            panic!("expected infeasible");
        };
        assert!(verify_certificate(&sys, &cert).unwrap());
        assert!(cert.bound_multipliers.iter().any(|b| b.kind == BoundKind::Upper));

        sys.set_upper(1, Some(int(2)));
        let Feasibility::Feasible(x) = solve_feasibility(&sys).unwrap() else {
            panic!("expected feasible");
        };
        assert!(sys.is_satisfied_by(&x));
    }

    #[test]
    fn shifted_lower_bounds() {
        let mut sys = LinearSystem::new(2);
        sys.push_row(row(&[1, -1]), ratio(1, 2));
        sys.set_lower(0, int(-3));
        sys.set_lower(1, ratio(-1, 3));
        let Feasibility::Feasible(x) = solve_feasibility(&sys).unwrap() else {
            panic!("expected feasible");
        };
        assert!(sys.is_satisfied_by(&x));

        // Crossed box.
        let mut crossed = LinearSystem::new(1);
        crossed.set_lower(0, int(2));
        crossed.set_upper(0, Some(int(1)));
        let Feasibility::Infeasible(cert) = solve_feasibility(&crossed).unwrap() else {
            panic!("expected infeasible");
        };
        assert!(verify_certificate(&crossed, &cert).unwrap());
    }

    #[test]
    fn integer_normalization_keeps_validity() {
        let mut sys = LinearSystem::new(3);
        sys.push_row(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)], int(1));
        sys.push_row(vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)], int(2));
        let Feasibility::Infeasible(cert) = solve_feasibility(&sys).unwrap() else {
            panic!("expected infeasible");
        };
        let ints = cert.to_integers();
        assert!(ints.multipliers.iter().all(|m| m.is_integer()));
        assert!(verify_certificate(&sys, &ints).unwrap());
    }

    #[test]
    fn degenerate_redundant_rows() {
        // Duplicated rows plus a zero row force degenerate pivots.
        let mut sys = LinearSystem::new(4);
        for _ in 0..3 {
            sys.push_row(row(&[1, 1, 1, 1]), int(1));
        }
        sys.push_row(row(&[0, 0, 0, 0]), int(0));
        sys.push_row(row(&[1, -1, 0, 0]), int(0));
        sys.push_row(row(&[0, 0, 1, -1]), int(0));
        let Feasibility::Feasible(x) = solve_feasibility(&sys).unwrap() else {
            panic!("expected feasible");
        };
        assert!(sys.is_satisfied_by(&x));
    }
}
