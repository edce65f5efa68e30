//! Seeded sampling from a witness distribution.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::outcome::MomentTerm;
use crate::rational::{to_f64, Rational};

use super::JointDistribution;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMoment {
    pub term: MomentTerm,
    /// Sample mean of the product, `(#(+1) - #(-1)) / n_samples`.
    pub value: Rational,
}

/// Draws `n_samples` atoms from `witness` and reports the sample mean of each
/// term. The same seed always yields the same result.
pub fn sample(
    witness: &JointDistribution,
    terms: &[MomentTerm],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<EmpiricalMoment>> {
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be at least 1".into()));
    }
    for term in terms {
        witness.system().check_term(term)?;
    }
    let weights: Vec<f64> = witness.weights().iter().map(to_f64).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidDistribution(format!("cannot sample witness: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![0i64; terms.len()];
    for _ in 0..n_samples {
        let bits = dist.sample(&mut rng) as u32;
        for (s, term) in sums.iter_mut().zip(terms) {
            *s += term.eval_bits(bits) as i64;
        }
    }
    Ok(terms
        .iter()
        .zip(sums)
        .map(|(term, s)| EmpiricalMoment {
            term: *term,
            value: Rational::new(s.into(), (n_samples as i64).into()),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::VariableSystem;
    use crate::rational::int;
    use num_traits::Zero;

    #[test]
    fn point_mass_is_exact() {
        let sys = VariableSystem::new(&["A", "B", "C"]).unwrap();
        let atom = sys.parse_atom("+-+").unwrap();
        let mut weights = vec![Rational::zero(); 8];
        weights[atom.index()] = int(1);
        let d = JointDistribution::new(sys.clone(), weights).unwrap();
        let terms = [sys.term(&["A", "B"]).unwrap(), sys.term(&["A", "C"]).unwrap()];
        let out = sample(&d, &terms, 17, 3).unwrap();
        assert_eq!(out[0].value, int(-1));
        assert_eq!(out[1].value, int(1));
    }

    #[test]
    fn uniform_triple_near_zero_and_seeded() {
        let sys = VariableSystem::new(&["A", "B", "C"]).unwrap();
        let d = JointDistribution::uniform(sys.clone());
        let terms = [sys.term(&["A", "B", "C"]).unwrap()];
        let a = sample(&d, &terms, 100_000, 7).unwrap();
        // CLT: sd = 1/sqrt(n) ~ 0.0032, so 0.02 is > 6 sd.
        assert!(to_f64(&a[0].value).abs() < 0.02);
        assert_eq!(a, sample(&d, &terms, 100_000, 7).unwrap());
    }

    #[test]
    fn rejects_zero_samples() {
        let sys = VariableSystem::new(&["A"]).unwrap();
        let d = JointDistribution::uniform(sys.clone());
        assert!(sample(&d, &[sys.term(&["A"]).unwrap()], 0, 1).is_err());
    }
}
