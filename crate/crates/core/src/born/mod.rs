//! Measurement with outcome weights `|alpha|^(2 + delta)` instead of `|alpha|^2`.

mod bounds;
mod gadget;

pub use bounds::{
    delta_bound_from_search, delta_bound_from_signaling, marginal, scale_invariance_check, signaling_tvd, ScaleCheck,
    Violation, ViolationKind,
};
pub use gadget::{
    born_search, search_ancillas, simulate_postselect, teleport_signal, BornSearchOutcome, Postselected,
    TeleportOutcome, WeightedBranch, WeightedBranches, SEARCH_SAMPLES,
};

use crate::qcore::{sample_index, PureState};
use crate::{Error, Result};
use rand::Rng;

/// Born rule deformed to `p_x ∝ |alpha_x|^(2 + delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornModel {
    delta: f64,
}

impl BornModel {
    pub fn new(delta: f64) -> Result<Self> {
        if !delta.is_finite() || 2.0 + delta <= 0.0 {
            return Err(Error::OutOfRange { value: delta, range: "delta > -2" });
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Exponent `p = 2 + delta`.
    pub fn exponent(&self) -> f64 {
        2.0 + self.delta
    }

    /// Unnormalized outcome weight of an amplitude with magnitude `r`.
    pub fn weight(&self, r: f64) -> f64 {
        if r == 0.0 {
            0.0
        } else {
            r.powf(self.exponent())
        }
    }

    /// Outcome distribution over the computational basis.
    pub fn probabilities(&self, s: &PureState) -> Vec<f64> {
        let w: Vec<f64> = s.amps().iter().map(|a| self.weight(a.norm())).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    pub(crate) fn require_nonzero(&self) -> Result<()> {
        if self.delta == 0.0 {
            Err(Error::ZeroDelta)
        } else {
            Ok(())
        }
    }
}

/// Samples a computational-basis outcome under the deformed rule.
pub fn born_sample<R: Rng + ?Sized>(s: &PureState, model: BornModel, rng: &mut R) -> usize {
    sample_index(&model.probabilities(s), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, computational_basis, measure, CVector};
    use crate::rng::trial_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reweighted_probabilities() {
        let s = PureState::from_real(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]).unwrap();
        let p = BornModel::new(2.0).unwrap().probabilities(&s);
        assert_abs_diff_eq!(p[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.8, epsilon = 1e-15);
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        for d in [-1.0, 0.3, 5.0] {
            let p = BornModel::new(d).unwrap().probabilities(&plus);
            assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_nonpositive_exponent() {
        assert!(BornModel::new(-2.0).is_err());
        assert!(BornModel::new(f64::NAN).is_err());
    }

    #[test]
    fn scalar_multiples_give_same_distribution() {
        let model = BornModel::new(0.7).unwrap();
        let v = CVector::from_vec(vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.0, 0.4)]);
        let a = PureState::normalized(vec![3], v.clone()).unwrap();
        let w: Vec<f64> = v.iter().map(|z| model.weight((z * c(0.2, -1.3)).norm())).collect();
        let total: f64 = w.iter().sum();
        for (p, x) in model.probabilities(&a).iter().zip(&w) {
            assert_abs_diff_eq!(*p, x / total, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_delta_matches_standard_measurement() {
        let s = PureState::from_real(&[0.1, 0.7, 0.3, 0.2]).unwrap();
        let model = BornModel::new(0.0).unwrap();
        let trials = 10_000;
        let mut born = [0usize; 4];
        let mut standard = [0usize; 4];
        let mut rng = trial_rng(8, 0);
        let basis = computational_basis(4);
        for _ in 0..trials {
            born[born_sample(&s, model, &mut rng)] += 1;
            standard[measure(&s, &[0, 1], &basis, &mut rng).unwrap().0] += 1;
        }
        // Chi-squared with 3 degrees of freedom; 16.27 is the 0.999 quantile.
        for counts in [born, standard] {
            let chi2: f64 = s
                .probabilities()
                .iter()
                .zip(counts)
                .map(|(p, n)| (n as f64 - p * trials as f64).powi(2) / (p * trials as f64))
                .sum();
            assert!(chi2 < 16.27, "chi2 = {chi2}");
        }
    }
}
