use super::BornModel;
use crate::qcore::{haar_state_dims, local_layout, CMatrix, PureState, C64};
use crate::{Error, Result};
use rand::Rng;

/// Smallest deviation compatible with a signal of bias `epsilon` on `n` qubits, to first
/// order: `epsilon / n`.
pub fn delta_bound_from_signaling(epsilon: f64, n: usize) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::OutOfRange { value: epsilon, range: "(0, 1]" });
    }
    if n == 0 {
        return Err(Error::OutOfRange { value: 0.0, range: "n >= 1" });
    }
    Ok(epsilon / n as f64)
}

/// Smallest deviation compatible with searching `N` items in `Q` queries on `m` qubits:
/// `max(0, (1/6 - 2Q/sqrt N) / m)`.
///
/// When `N` is a perfect square the value is formed as a reduced integer ratio, so it is the
/// correctly rounded quotient.
pub fn delta_bound_from_search(queries: u64, n_items: u64, m: u64) -> f64 {
    let root = n_items.isqrt();
    if root * root == n_items {
        let (q, r, m) = (queries as u128, root as u128, m as u128);
        if 12 * q >= r {
            return 0.0;
        }
        let (num, den) = (r - 12 * q, 6 * m * r);
        let g = gcd(num, den);
        return (num / g) as f64 / (den / g) as f64;
    }
    let root = (n_items as f64).sqrt();
    ((1.0 / 6.0 - 2.0 * queries as f64 / root) / m as f64).max(0.0)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Marginal of a distribution over the joint outcomes of `dims`, keeping `keep` in order.
pub fn marginal(probs: &[f64], dims: &[usize], keep: &[usize]) -> Vec<f64> {
    let (offsets, bases) = local_layout(dims, keep);
    offsets.iter().map(|&o| bases.iter().map(|&b| probs[b + o]).sum()).collect()
}

/// Total variation distance between Bob's deformed-rule outcome distributions when Alice
/// does nothing and when she applies `u` to `alice`. Bob holds every other subsystem and
/// measures in the computational basis.
pub fn signaling_tvd(model: BornModel, state: &PureState, alice: &[usize], u: &CMatrix) -> Result<f64> {
    let bob: Vec<usize> = (0..state.dims().len()).filter(|j| !alice.contains(j)).collect();
    let moved = state.apply_local(alice, u)?;
    let p = marginal(&model.probabilities(state), state.dims(), &bob);
    let q = marginal(&model.probabilities(&moved), state.dims(), &bob);
    Ok(0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Which property an outcome rule broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Rescaling every amplitude by a common complex factor changed the distribution.
    ScaleInvariance,
    /// Outcome probabilities of a product state did not factor.
    TensorProduct,
}

/// A concrete input on which a rule misbehaves.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Amplitudes (for product violations, the two factors concatenated).
    pub amplitudes: Vec<C64>,
    /// Common factor applied (one for product violations).
    pub scalar: C64,
    /// Largest probability discrepancy.
    pub deviation: f64,
}

/// Outcome of [`scale_invariance_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleCheck {
    pub passed: bool,
    pub witness: Option<Violation>,
}

const CHECK_TOLERANCE: f64 = 1e-9;

fn distribution<F: Fn(C64) -> f64>(rule: &F, amps: &[C64]) -> Option<Vec<f64>> {
    let w: Vec<f64> = amps.iter().map(|&a| rule(a)).collect();
    let total: f64 = w.iter().sum();
    (total > 0.0 && total.is_finite()).then(|| w.into_iter().map(|x| x / total).collect())
}

fn max_diff(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn scale_violation<F: Fn(C64) -> f64>(rule: &F, amps: &[C64], k: C64) -> Option<Violation> {
    let scaled: Vec<C64> = amps.iter().map(|a| a * k).collect();
    let (p, q) = (distribution(rule, amps)?, distribution(rule, &scaled)?);
    let deviation = max_diff(&p, &q);
    (deviation > CHECK_TOLERANCE).then(|| Violation {
        kind: ViolationKind::ScaleInvariance,
        amplitudes: amps.to_vec(),
        scalar: k,
        deviation,
    })
}

fn product_violation<F: Fn(C64) -> f64>(rule: &F, a: &[C64], b: &[C64]) -> Option<Violation> {
    let joint: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    let (pa, pb, pj) = (distribution(rule, a)?, distribution(rule, b)?, distribution(rule, &joint)?);
    let factored: Vec<f64> = pa.iter().flat_map(|x| pb.iter().map(move |y| x * y)).collect();
    let deviation = max_diff(&pj, &factored);
    (deviation > CHECK_TOLERANCE).then(|| Violation {
        kind: ViolationKind::TensorProduct,
        amplitudes: a.iter().chain(b).copied().collect(),
        scalar: C64::new(1.0, 0.0),
        deviation,
    })
}

/// Tests an amplitude-to-weight rule for invariance under common complex rescaling and for
/// factorization on product states, returning the first violation found.
///
/// A fixed two-amplitude probe with factors `1/2` and `e^{i pi/3}` runs first, followed by
/// `trials` random states and factors of modulus at most one.
pub fn scale_invariance_check<F, R>(rule: F, trials: usize, rng: &mut R) -> Result<ScaleCheck>
where
    F: Fn(C64) -> f64,
    R: Rng + ?Sized,
{
    let probe = [C64::new((1.0f64 / 3.0).sqrt(), 0.0), C64::new(0.0, (2.0f64 / 3.0).sqrt())];
    let fixed = [C64::new(0.5, 0.0), C64::from_polar(1.0, std::f64::consts::FRAC_PI_3)];
    let found = fixed
        .iter()
        .find_map(|&k| scale_violation(&rule, &probe, k))
        .or_else(|| product_violation(&rule, &probe, &probe));
    if let Some(v) = found {
        return Ok(ScaleCheck { passed: false, witness: Some(v) });
    }
    for _ in 0..trials {
        let d = rng.random_range(2..=4);
        let s = haar_state_dims(vec![d], rng)?;
        let k = C64::from_polar(rng.random_range(0.05..=1.0), rng.random_range(0.0..std::f64::consts::TAU));
        let amps: Vec<C64> = s.amps().iter().copied().collect();
        if let Some(v) = scale_violation(&rule, &amps, k) {
            return Ok(ScaleCheck { passed: false, witness: Some(v) });
        }
        let t = haar_state_dims(vec![2], rng)?;
        let other: Vec<C64> = t.amps().iter().copied().collect();
        if let Some(v) = product_violation(&rule, &amps, &other) {
            return Ok(ScaleCheck { passed: false, witness: Some(v) });
        }
    }
    Ok(ScaleCheck { passed: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state, haar_unitary};
    use crate::rng::trial_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn signaling_bound_arithmetic() {
        assert_abs_diff_eq!(delta_bound_from_signaling(0.5, 10).unwrap(), 0.05, epsilon = 1e-17);
        assert!(delta_bound_from_signaling(1e-300, 3).unwrap() < 1e-299);
        assert!(delta_bound_from_signaling(0.0, 3).is_err());
        assert!(delta_bound_from_signaling(0.5, 0).is_err());
    }

    #[test]
    fn search_bound_arithmetic() {
        assert_eq!(delta_bound_from_search(0, 64, 6), 1.0 / 36.0);
        assert_eq!(delta_bound_from_search(2, 576, 3), 0.0);
        assert_eq!(delta_bound_from_search(5, 576, 3), 0.0);
        assert_abs_diff_eq!(delta_bound_from_search(0, 8, 1), 1.0 / 6.0, epsilon = 1e-16);
        for m in 1..=256u64 {
            for k in 1..=20u64 {
                let b = delta_bound_from_search(k, (24 * k).pow(2), m);
                assert_eq!(b, 1.0 / (12 * m) as f64, "m={m} k={k}");
                let scaled = b * (12 * m) as f64;
                if (12 * m / 3).is_power_of_two() {
                    assert_eq!(scaled, 1.0);
                } else {
                    assert!((scaled - 1.0).abs() <= f64::EPSILON, "m={m}");
                }
            }
        }
    }

    #[test]
    fn marginal_of_product() {
        let p = [0.1 * 0.3, 0.1 * 0.7, 0.9 * 0.3, 0.9 * 0.7];
        let m = marginal(&p, &[2, 2], &[1]);
        assert_abs_diff_eq!(m[0], 0.3, epsilon = 1e-15);
        let m = marginal(&p, &[2, 2], &[0]);
        assert_abs_diff_eq!(m[1], 0.9, epsilon = 1e-15);
    }

    #[test]
    fn standard_rule_does_not_signal() {
        let mut rng = trial_rng(12, 0);
        let s = haar_state(4, &mut rng).unwrap();
        let u = haar_unitary(4, &mut rng);
        let tvd = signaling_tvd(BornModel::new(0.0).unwrap(), &s, &[0, 1], &u).unwrap();
        assert!(tvd < 1e-12);
    }

    #[test]
    fn deformed_rule_signal_respects_first_order_bound() {
        let mut rng = trial_rng(13, 0);
        let model = BornModel::new(0.1).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let s = haar_state(4, &mut rng).unwrap();
            let u = haar_unitary(4, &mut rng);
            worst = worst.max(signaling_tvd(model, &s, &[0, 1], &u).unwrap());
        }
        assert!(worst > 0.0);
        assert!(delta_bound_from_signaling(worst, 4).unwrap() <= 0.1);
    }

    #[test]
    fn power_laws_pass() {
        let mut rng = trial_rng(14, 0);
        let check = scale_invariance_check(|a: C64| a.norm().powi(3), 200, &mut rng).unwrap();
        assert!(check.passed && check.witness.is_none());
    }

    #[test]
    fn mixed_powers_fail_with_witness() {
        let mut rng = trial_rng(15, 0);
        let check = scale_invariance_check(|a: C64| a.norm_sqr() + a.norm_sqr().powi(2), 10, &mut rng).unwrap();
        let w = check.witness.unwrap();
        assert!(!check.passed);
        assert_eq!(w.kind, ViolationKind::ScaleInvariance);
        assert_eq!(w.scalar, C64::new(0.5, 0.0));
        assert_eq!(w.amplitudes.len(), 2);
    }

    #[test]
    fn phase_dependent_rule_fails() {
        let mut rng = trial_rng(16, 0);
        let rule = |a: C64| a.norm_sqr() * (2.0 + a.arg().cos());
        let w = scale_invariance_check(rule, 10, &mut rng).unwrap().witness.unwrap();
        assert_eq!(w.kind, ViolationKind::ScaleInvariance);
        assert_eq!(w.scalar, C64::from_polar(1.0, std::f64::consts::FRAC_PI_3));
        assert!(w.deviation > 1e-6);
    }
}
