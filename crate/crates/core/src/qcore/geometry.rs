//! Rigid motions of state pairs on the projective sphere.

use super::{complete_basis, CMatrix, CVector, PureState, C64};
use crate::{Error, Result};

/// Orthonormal frame `(e1, e2)` of the plane spanned by `a` and `b`, with `b`
/// rephased so that `<a|b>` is real and nonnegative, and the angle between them.
fn frame(a: &CVector, b: &CVector) -> Option<(CVector, CVector, f64)> {
    let ov = a.dotc(b);
    let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { C64::new(1.0, 0.0) };
    let b = b * phase;
    let perp = &b - a * C64::new(ov.norm(), 0.0);
    let s = perp.norm();
    if s <= 1e-15 {
        return None;
    }
    let angle = s.atan2(ov.norm());
    Some((a.clone(), perp / C64::new(s, 0.0), angle))
}

/// Unitary taking `a` to `ta` and `b` to `tb` up to phases.
///
/// Requires the two pairs to subtend the same angle (within `1e-9`) and to be distinct.
pub fn aligning_unitary(a: &PureState, b: &PureState, ta: &PureState, tb: &PureState) -> Result<CMatrix> {
    let d = a.dim();
    for s in [b, ta, tb] {
        if s.dim() != d {
            return Err(Error::DimMismatch { expected: d, actual: s.dim() });
        }
    }
    let degenerate = || Error::InvalidState("pair of coincident states cannot be aligned".into());
    let (e1, e2, alpha) = frame(a.amps(), b.amps()).ok_or_else(degenerate)?;
    let (f1, f2, beta) = frame(ta.amps(), tb.amps()).ok_or_else(degenerate)?;
    if (alpha - beta).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("pair angles differ: {alpha} vs {beta}")));
    }
    let src = complete_basis(&[e1, e2], d);
    let dst = complete_basis(&[f1, f2], d);
    Ok(dst * src.adjoint())
}

/// `cos(t) x + sin(t) w` for orthonormal `x`, `w`.
pub fn geodesic_point(x: &CVector, w: &CVector, t: f64) -> CVector {
    x * C64::new(t.cos(), 0.0) + w * C64::new(t.sin(), 0.0)
}

/// Unit tangent at `x` pointing along the geodesic towards `y`.
pub fn geodesic_direction(x: &PureState, y: &PureState) -> Result<CVector> {
    frame(x.amps(), y.amps())
        .map(|(_, w, _)| w)
        .ok_or_else(|| Error::InvalidState("coincident states have no geodesic direction".into()))
}

/// Optimal two-outcome basis for telling `a` from `b` (first vector votes for `a`).
///
/// Lies in the plane of the pair, symmetric about its bisector; the success
/// probability is `(1 + sqrt(1 - |<a|b>|^2)) / 2`. The basis is completed to the full space.
pub fn helstrom_basis(a: &PureState, b: &PureState) -> Result<Vec<CVector>> {
    let (e1, e2, alpha) = frame(a.amps(), b.amps())
        .ok_or_else(|| Error::InvalidState("coincident states cannot be discriminated".into()))?;
    let va = geodesic_point(&e1, &e2, alpha / 2.0 - std::f64::consts::FRAC_PI_4);
    let vb = geodesic_point(&e1, &e2, alpha / 2.0 + std::f64::consts::FRAC_PI_4);
    let full = complete_basis(&[va, vb], a.dim());
    Ok(full.column_iter().map(|c| c.into_owned()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state, is_unitary, measurement_branches};
    use crate::rng::trial_rng;

    #[test]
    fn aligns_random_pairs() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..20 {
            let a = haar_state(3, &mut rng).unwrap();
            let b = haar_state(3, &mut rng).unwrap();
            // Targets with the same angle: a unitary image of the pair.
            let u = crate::qcore::haar_unitary(8, &mut rng);
            let ta = a.apply(&u).unwrap();
            let tb = b.apply(&u).unwrap();
            let w = aligning_unitary(&a, &b, &ta, &tb).unwrap();
            assert!(is_unitary(&w, 1e-10));
            assert!((a.apply(&w).unwrap().fidelity(&ta) - 1.0).abs() < 1e-10);
            assert!((b.apply(&w).unwrap().fidelity(&tb) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_mismatched_angles() {
        let a = PureState::from_real(&[1.0, 0.0]).unwrap();
        let b = PureState::from_real(&[0.0, 1.0]).unwrap();
        let c = PureState::from_real(&[1.0, 1.0]).unwrap();
        assert!(aligning_unitary(&a, &b, &a, &c).is_err());
        assert!(aligning_unitary(&a, &a, &a, &b).is_err());
    }

    #[test]
    fn helstrom_success_probability() {
        let mut rng = trial_rng(6, 0);
        for _ in 0..20 {
            let a = haar_state(2, &mut rng).unwrap();
            let b = haar_state(2, &mut rng).unwrap();
            let basis = helstrom_basis(&a, &b).unwrap();
            let pa = measurement_branches(&a, &[0, 1], &basis).unwrap()[0].probability;
            let pb = measurement_branches(&b, &[0, 1], &basis).unwrap()[1].probability;
            let expect = 0.5 * (1.0 + (1.0 - a.fidelity(&b)).sqrt());
            assert!((pa - expect).abs() < 1e-10 && (pb - expect).abs() < 1e-10);
        }
    }
}
