//! Statevector arithmetic for up to three spin-1/2 systems.
//!
//! Floating point stays inside this module. [`emit_scenario`] hands exact
//! rationals to the feasibility engine and records any rationalization.
//!
//! Basis ordering: subsystem 0 is the most significant bit, and `|0⟩` is
//! the `+1` eigenvector of `Z`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::joint::{ghz_epsilon_scenario, Scenario};
use crate::outcome::VariableSystem;
use crate::rational::{parse_number_with_precision, to_f64, Rational, DEFAULT_PRECISION_DIGITS};

pub const MAX_SUBSYSTEMS: usize = 3;
const NORM_TOLERANCE: f64 = 1e-12;
/// Allowed imaginary residue of an expectation value.
const IMAG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    subsystems: usize,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Domain(format!("{len} amplitudes is not 2^k with k >= 1")));
        }
        let subsystems = len.trailing_zeros() as usize;
        if subsystems > MAX_SUBSYSTEMS {
            return Err(Error::Oversize(format!(
                "{subsystems} subsystems; at most {MAX_SUBSYSTEMS} supported"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Domain(format!("state has squared norm {norm}, expected 1")));
        }
        Ok(Self { amplitudes, subsystems })
    }

    /// Normalizes `amplitudes` before construction.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn subsystems(&self) -> usize {
        self.subsystems
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Single-subsystem factor of a product observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spin {
    I,
    X,
    Y,
    Z,
    /// `cos θ · Z + sin θ · X`, θ in degrees.
    Angle(f64),
}

impl Spin {
    fn matrix(self) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            Spin::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            Spin::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Spin::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            Spin::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            Spin::Angle(deg) => {
                let (s, co) = deg.to_radians().sin_cos();
                [[c(co, 0.0), c(s, 0.0)], [c(s, 0.0), c(-co, 0.0)]]
            }
        }
    }
}

/// Tensor product of one [`Spin`] per subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    pub factors: Vec<Spin>,
}

impl SpinObservable {
    pub fn new(factors: Vec<Spin>) -> Self {
        Self { factors }
    }

    /// `O|ψ⟩`, applying each factor to its own subsystem.
    fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let k = self.factors.len();
        let mut out = psi.to_vec();
        for (i, f) in self.factors.iter().enumerate() {
            if *f == Spin::I {
                continue;
            }
            let m = f.matrix();
            let bit = 1usize << (k - 1 - i);
            let mut next = vec![Complex64::new(0.0, 0.0); out.len()];
            for (idx, amp) in out.iter().enumerate() {
                let b = usize::from(idx & bit != 0);
                for (r, row) in m.iter().enumerate() {
                    let target = if r == 1 { idx | bit } else { idx & !bit };
                    next[target] += row[b] * amp;
                }
            }
            out = next;
        }
        out
    }
}

/// `⟨ψ|O|ψ⟩`.
pub fn expectation(state: &StateVector, obs: &SpinObservable) -> Result<f64> {
    if obs.factors.len() != state.subsystems {
        return Err(Error::Domain(format!(
            "observable acts on {} subsystems, state has {}",
            obs.factors.len(),
            state.subsystems
        )));
    }
    let o_psi = obs.apply(&state.amplitudes);
    let value: Complex64 = state.amplitudes.iter().zip(&o_psi).map(|(a, b)| a.conj() * b).sum();
    if value.im.abs() > IMAG_TOLERANCE {
        return Err(Error::Domain(format!("expectation has imaginary part {}", value.im)));
    }
    Ok(value.re)
}

fn basis_pair(k: usize, first: usize, second: usize, sign: f64) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << k];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[first] = Complex64::new(h, 0.0);
    amps[second] = Complex64::new(sign * h, 0.0);
    StateVector::new(amps).expect("normalized by construction")
}

/// `(|000⟩ - |111⟩)/√2`: eigenvalue `+1` for `X Y Y`, `Y X Y`, `Y Y X` and
/// `-1` for `X X X`.
pub fn ghz_state() -> StateVector {
    basis_pair(3, 0b000, 0b111, -1.0)
}

/// `(|001⟩ + |110⟩)/√2`, the plus-sign superposition read literally in the
/// `Z` basis. With standard Paulis its triple values are `(1, 1, -1, 1)`.
pub fn plus_ghz_state() -> StateVector {
    basis_pair(3, 0b001, 0b110, 1.0)
}

/// `(|01⟩ - |10⟩)/√2`.
pub fn singlet_state() -> StateVector {
    basis_pair(2, 0b01, 0b10, -1.0)
}

/// The four GHZ operators in order `X Y Y`, `Y X Y`, `Y Y X`, `X X X`.
pub fn ghz_operators() -> [SpinObservable; 4] {
    use Spin::{X, Y};
    [
        SpinObservable::new(vec![X, Y, Y]),
        SpinObservable::new(vec![Y, X, Y]),
        SpinObservable::new(vec![Y, Y, X]),
        SpinObservable::new(vec![X, X, X]),
    ]
}

/// Correlation of two analyzers `θ` degrees apart on the singlet.
pub fn bell_correlation(theta_degrees: f64) -> f64 {
    let obs = SpinObservable::new(vec![Spin::Angle(0.0), Spin::Angle(theta_degrees)]);
    expectation(&singlet_state(), &obs).expect("two subsystems")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// Three zero-mean variables `X, Y, Z` with
    /// `E(XY) = E(XZ) = -√3/2` and `E(YZ) = -1/2`.
    Bell,
    /// GHZ triples `1 - ε` with `E(X1X2X3) = -1 + ε`.
    Ghz(Rational),
}

pub fn emit_scenario(preset: &Preset) -> Result<Scenario> {
    emit_scenario_with_precision(preset, DEFAULT_PRECISION_DIGITS)
}

/// Builds the preset scenario. Bell correlations are computed on the
/// singlet, matched against their closed forms within `1e-12`, then taken
/// from the closed forms rationalized to `10^-digits`.
pub fn emit_scenario_with_precision(preset: &Preset, digits: u32) -> Result<Scenario> {
    match preset {
        Preset::Ghz(eps) => ghz_epsilon_scenario(eps),
        Preset::Bell => {
            let sys = VariableSystem::new(&["X", "Y", "Z"])?;
            let mut s = Scenario::new(sys).with_zero_means()?;
            let pairs = [(["X", "Y"], 30.0, "-sqrt(3)/2"), (["Y", "Z"], 60.0, "-1/2"), (["X", "Z"], 30.0, "-sqrt(3)/2")];
            for (names, angle, closed) in pairs {
                let computed = bell_correlation(angle);
                let parsed = parse_number_with_precision(closed, digits)?;
                if (computed - to_f64(&parsed.value)).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "statevector gives {computed} for {closed}"
                    )));
                }
                s.add_moment(&names, parsed.value)?;
                if let Some(note) = parsed.approximation {
                    s.add_approximation(note);
                }
            }
            Ok(s)
        }
    }
}
