use crate::fsp::{apply_map, NonUnitaryMap};
use crate::qcore::{geodesic_direction, geodesic_point, haar_state_dims, CMatrix, CVector, PureState, C64};
use crate::rng::par_trials;
use crate::{Error, Result};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

type Evaluator = dyn Fn(&PureState) -> Result<PureState> + Send + Sync;

/// A map from pure states to pure states on a fixed space.
#[derive(Clone)]
pub struct NonlinearMap {
    dims: Vec<usize>,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for NonlinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonlinearMap").field("dims", &self.dims).finish_non_exhaustive()
    }
}

impl NonlinearMap {
    pub fn new<F>(dims: Vec<usize>, f: F) -> Self
    where
        F: Fn(&PureState) -> Result<PureState> + Send + Sync + 'static,
    {
        Self { dims, eval: Arc::new(f) }
    }

    /// `s -> M s / |M s|`.
    pub fn from_nonunitary(m: NonUnitaryMap) -> Self {
        let dims = vec![m.dim()];
        Self::new(dims, move |s| apply_map(&m, s))
    }

    pub fn from_unitary(u: CMatrix) -> Self {
        let dims = vec![u.nrows()];
        Self::new(dims, move |s| s.apply(&u))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Evaluates the map, checking the output is a unit vector of the right size.
    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        if s.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: s.dim() });
        }
        let out = (self.eval)(s)?;
        if out.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: out.dim() });
        }
        let norm = out.amps().norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(out)
    }
}

/// Best stretch factor found and a short segment achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct Magnification {
    /// Lower bound on the largest distance ratio `d(S a, S b) / d(a, b)`.
    pub ratio: f64,
    pub start: PureState,
    pub end: PureState,
}

/// Length of the probe segments.
pub const PROBE_LENGTH: f64 = 1e-4;
const REFINE_STEPS: usize = 50;

fn random_tangent<R: Rng + ?Sized>(x: &PureState, rng: &mut R) -> Result<CVector> {
    loop {
        let y = haar_state_dims(x.dims().to_vec(), rng)?;
        if x.fidelity(&y) < 1.0 - 1e-6 {
            return geodesic_direction(x, &y);
        }
    }
}

fn stretch(map: &NonlinearMap, a: &PureState, w: &CVector) -> Result<(f64, PureState)> {
    let b = PureState::normalized(a.dims().to_vec(), geodesic_point(a.amps(), w, PROBE_LENGTH))?;
    let ratio = map.apply(a)?.angle(&map.apply(&b)?) / a.angle(&b);
    Ok((ratio, b))
}

/// Searches for the largest local stretch of `map`: `samples` random probes of length
/// [`PROBE_LENGTH`], then a random-perturbation hill climb from the best one.
///
/// Distances are Fubini-Study angles `acos |<a|b>|`. The result is a lower bound.
pub fn estimate_magnification<R: Rng + ?Sized>(
    map: &NonlinearMap,
    samples: usize,
    rng: &mut R,
) -> Result<Magnification> {
    if samples == 0 {
        return Err(Error::OutOfRange { value: 0.0, range: "samples >= 1" });
    }
    let dims = map.dims().to_vec();
    let probe = |r: &mut crate::rng::TrialRng| -> Result<(f64, PureState, CVector)> {
        let a = haar_state_dims(dims.clone(), r)?;
        let w = random_tangent(&a, r)?;
        Ok((stretch(map, &a, &w)?.0, a, w))
    };
    let probes = par_trials(rng.random(), samples, |_, r| probe(r));
    let mut best = None::<(f64, PureState, CVector)>;
    for p in probes {
        let p = p?;
        if best.as_ref().is_none_or(|b| p.0 > b.0) {
            best = Some(p);
        }
    }
    let (mut ratio, mut a, mut w) = best.expect("at least one probe");
    let mut step = 0.1;
    for _ in 0..REFINE_STEPS {
        let shift = random_tangent(&a, rng)?;
        let a2 = PureState::normalized(dims.clone(), geodesic_point(a.amps(), &shift, step))?;
        // Keep the probe direction, made tangent at the moved point, or try a fresh one.
        let keep = w.clone() - a2.amps() * a2.amps().dotc(&w);
        let w2 = if rng.random::<bool>() && keep.norm() > 1e-6 {
            &keep / C64::new(keep.norm(), 0.0)
        } else {
            random_tangent(&a2, rng)?
        };
        let (r2, _) = stretch(map, &a2, &w2)?;
        if r2 > ratio {
            (ratio, a, w) = (r2, a2, w2);
        } else {
            step *= 0.8;
        }
    }
    let (_, end) = stretch(map, &a, &w)?;
    Ok(Magnification { ratio, start: a, end })
}

/// Result of [`nonlinear_amplify`].
#[derive(Debug, Clone, PartialEq)]
pub struct Amplification {
    pub iterations: usize,
    pub a: PureState,
    pub b: PureState,
    /// Pair angle before each round and after the last.
    pub distances: Vec<f64>,
}

const AMPLIFY_CAP: usize = 10_000;

/// Grows the angle between `a` and `b` to at least `target` radians by repeatedly moving
/// the pair (rigidly, by a unitary) onto the geodesic through `seg`, centred on its
/// midpoint, and applying the map.
pub fn nonlinear_amplify(
    map: &NonlinearMap,
    seg: &Magnification,
    a: &PureState,
    b: &PureState,
    target: f64,
) -> Result<Amplification> {
    if seg.ratio <= 1.0 + 1e-6 {
        return Err(Error::NoAmplification(seg.ratio));
    }
    if !(target > 0.0 && target < std::f64::consts::FRAC_PI_2) {
        return Err(Error::OutOfRange { value: target, range: "(0, pi/2)" });
    }
    let half = seg.start.angle(&seg.end) / 2.0;
    let w = geodesic_direction(&seg.start, &seg.end)?;
    let mid = geodesic_point(seg.start.amps(), &w, half);
    let tangent = seg.start.amps() * C64::new(-half.sin(), 0.0) + &w * C64::new(half.cos(), 0.0);
    let dims = map.dims().to_vec();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut distances = vec![a.angle(&b)];
    if distances[0] <= 0.0 {
        return Err(Error::InvalidState("pair of coincident states cannot be separated".into()));
    }
    let mut iterations = 0;
    while distances[iterations] < target {
        if iterations == AMPLIFY_CAP {
            return Err(Error::IterationCap(AMPLIFY_CAP));
        }
        let d = distances[iterations];
        let ta = PureState::normalized(dims.clone(), geodesic_point(&mid, &tangent, -d / 2.0))?;
        let tb = PureState::normalized(dims.clone(), geodesic_point(&mid, &tangent, d / 2.0))?;
        a = map.apply(&ta)?;
        b = map.apply(&tb)?;
        distances.push(a.angle(&b));
        iterations += 1;
    }
    Ok(Amplification { iterations, a, b, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_unitary, PureState};
    use crate::rng::trial_rng;

    fn diag_map(k: f64) -> NonlinearMap {
        NonlinearMap::from_nonunitary(NonUnitaryMap::diagonal(&[1.0, k]).unwrap())
    }

    fn close_pair(d: f64) -> (PureState, PureState) {
        let a = PureState::from_real(&[1.0, 0.0]).unwrap();
        let b = PureState::from_real(&[d.cos(), d.sin()]).unwrap();
        (a, b)
    }

    #[test]
    fn unitary_maps_do_not_magnify() {
        let mut rng = trial_rng(40, 0);
        let map = NonlinearMap::from_unitary(haar_unitary(4, &mut rng));
        let m = estimate_magnification(&map, 200, &mut rng).unwrap();
        assert!((m.ratio - 1.0).abs() < 1e-6, "{}", m.ratio);
        let (a, b) = close_pair(1e-3);
        let a = a.tensor(&PureState::from_real(&[1.0, 0.0]).unwrap()).unwrap().with_dims(vec![4]).unwrap();
        let b = b.tensor(&PureState::from_real(&[1.0, 0.0]).unwrap()).unwrap().with_dims(vec![4]).unwrap();
        assert!(matches!(nonlinear_amplify(&map, &m, &a, &b, 0.3), Err(Error::NoAmplification(_))));
    }

    #[test]
    fn diagonal_maps_magnify_by_condition_number() {
        for (seed, k) in [(41, 2.0), (42, 1.1), (43, 1.5)] {
            let m = estimate_magnification(&diag_map(k), 1000, &mut trial_rng(seed, 0)).unwrap();
            assert!(m.ratio <= k * (1.0 + 1e-6), "k={k} r={}", m.ratio);
            assert!(m.ratio >= 0.95 * k, "k={k} r={}", m.ratio);
            assert!(m.start.angle(&m.end) <= 2.0 * PROBE_LENGTH);
        }
    }

    #[test]
    fn higher_dimensional_map() {
        let m = estimate_magnification(
            &NonlinearMap::from_nonunitary(NonUnitaryMap::diagonal(&[1.0, 1.3, 2.0]).unwrap()),
            1000,
            &mut trial_rng(44, 0),
        )
        .unwrap();
        assert!(m.ratio >= 0.95 * 2.0 && m.ratio <= 2.0 + 1e-6, "{}", m.ratio);
    }

    #[test]
    fn amplification_reaches_target() {
        let map = diag_map(2.0);
        let seg = estimate_magnification(&map, 1000, &mut trial_rng(45, 0)).unwrap();
        let (a, b) = close_pair(2f64.powi(-20));
        let out = nonlinear_amplify(&map, &seg, &a, &b, 0.3).unwrap();
        assert!(out.iterations <= 30, "{}", out.iterations);
        let bound = ((0.3 / 2f64.powi(-20)).ln() / seg.ratio.ln()).ceil() as usize + 10;
        assert!(out.iterations <= bound);
        assert!(out.a.angle(&out.b) >= 0.3);
        assert!(out.distances.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn already_separated_needs_nothing() {
        let map = diag_map(2.0);
        let seg = estimate_magnification(&map, 100, &mut trial_rng(46, 0)).unwrap();
        let (a, b) = close_pair(0.5);
        assert_eq!(nonlinear_amplify(&map, &seg, &a, &b, 0.3).unwrap().iterations, 0);
    }

    #[test]
    fn iterations_scale_with_log_gain() {
        let (a, b) = close_pair(1e-6);
        let run = |k: f64, seed| {
            let map = diag_map(k);
            let seg = estimate_magnification(&map, 1000, &mut trial_rng(seed, 0)).unwrap();
            nonlinear_amplify(&map, &seg, &a, &b, 0.3).unwrap().iterations as i64
        };
        let (slow, fast) = (run(1.5, 47), run(2.25, 48));
        assert!((fast as f64 - slow as f64 / 2.0).abs() <= 2.0, "{slow} vs {fast}");
    }

    #[test]
    fn rejects_bad_outputs() {
        let map = NonlinearMap::new(vec![2], |s| Ok(s.clone()));
        assert!(map.apply(&PureState::from_real(&[1.0, 0.0, 0.0]).unwrap()).is_err());
    }
}
