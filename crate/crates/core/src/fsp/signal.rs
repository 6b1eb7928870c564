use super::NonUnitaryMap;
use crate::channels::BinaryChannel;
use crate::qcore::{computational_basis, measurement_branches, CVector, PureEnsemble, PureState, C64};
use crate::{Error, Result};
use std::f64::consts::LN_2;

/// Who applies the non-unitary map and who reads the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Alice applies `M` to her half (bit 1) or does nothing (bit 0); Bob measures.
    AliceToBob,
    /// Bob measures his half (bit 0) or does nothing (bit 1); `M` then acts on Alice's
    /// half and she measures in the left-singular basis.
    BobToAlice,
}

/// `(|phi_min>|0> + |phi_max>|1>) / sqrt 2` with Alice's register first.
fn shared_state(m: &NonUnitaryMap) -> Result<PureState> {
    let d = m.dim();
    let mut v = CVector::zeros(2 * d);
    let (lo, hi) = (m.min_input(), m.max_input());
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for i in 0..d {
        v[2 * i] = lo[i] * h;
        v[2 * i + 1] = hi[i] * h;
    }
    PureState::new(vec![d, 2], v)
}

/// Runs the chosen protocol and returns the induced binary channel.
///
/// The branch where a party measures is propagated as an ensemble of post-measurement
/// pure states; the map is applied to each member separately.
pub fn signal_channel(m: &NonUnitaryMap, direction: Direction) -> Result<BinaryChannel> {
    if m.dim() < 2 {
        return Err(Error::DimMismatch { expected: 2, actual: m.dim() });
    }
    let shared = shared_state(m)?;
    let (eps0, eps1) = match direction {
        Direction::AliceToBob => {
            let bob = computational_basis(2);
            let p1 = |s: &PureState| -> Result<f64> { Ok(measurement_branches(s, &[1], &bob)?[1].probability) };
            let flip0 = p1(&shared)?;
            let flip1 = 1.0 - p1(&m.apply_on(&shared, &[0])?)?;
            (flip0, flip1)
        }
        Direction::BobToAlice => {
            let d = m.dim();
            let mut alice: Vec<CVector> = vec![m.min_output()];
            alice.extend((0..d - 1).map(|i| m.svd().left(i)));
            let p0 = |s: &PureState| -> Result<f64> { Ok(measurement_branches(s, &[0], &alice)?[0].probability) };
            let measured = PureEnsemble::from_measurement(&shared, &[1], &computational_basis(2))?
                .map_states(|s| m.apply_on(s, &[0]))?;
            let mut flip0 = 0.0;
            for (w, s) in measured.members() {
                flip0 += w * (1.0 - p0(s)?);
            }
            let flip1 = p0(&m.apply_on(&shared, &[0])?)?;
            (flip0, flip1)
        }
    };
    BinaryChannel::new(eps0.clamp(0.0, 1.0), eps1.clamp(0.0, 1.0))
}

/// `3 / (8 ln 2) * delta^2`, the claimed capacity floor for condition number `1 + delta`.
pub fn fsp_capacity_bound(delta: f64) -> f64 {
    3.0 / (8.0 * LN_2) * delta * delta
}

/// Smallest condition number consistent with an observed output distance `tvd`:
/// `sqrt(1 + 2 tvd)`.
pub fn condition_bound_from_tvd(tvd: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tvd) {
        return Err(Error::OutOfRange { value: tvd, range: "[0, 1]" });
    }
    Ok((1.0 + 2.0 * tvd).sqrt())
}

/// Map applications `ceil(ln N / ln(1 + C^2))` for single-query search with a channel
/// of capacity `c`.
pub fn search_cost_from_capacity(n_items: u64, c: f64) -> Result<u64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::ZeroCapacity);
    }
    let ratio = (n_items as f64).ln() / (c * c).ln_1p();
    // Exact ratios such as 20 ln 2 / ln 2 must not round up on representation error.
    let nearest = ratio.round();
    let cost = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { ratio.ceil() };
    Ok(if cost >= u64::MAX as f64 { u64::MAX } else { cost.max(0.0) as u64 })
}
