use super::{apply_map, NonUnitaryMap};
use crate::qcore::{aligning_unitary, geodesic_point, helstrom_basis, measure, CMatrix, PureState};
use crate::search::{answer_state, SearchDecision, SearchInstance};
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::FRAC_PI_2;

/// Iteration cap for [`separate_states`].
pub const SEPARATION_CAP: usize = 10_000;

/// Trace distance the search amplifies to before its final measurement.
const SEARCH_TARGET: f64 = 0.9999;

/// Result of pulling two states apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// Number of map applications (one per step).
    pub iterations: usize,
    pub a: PureState,
    pub b: PureState,
    /// Aligning unitary used before each map application.
    pub unitaries: Vec<CMatrix>,
    /// Trace distance before the first step and after each step.
    pub distances: Vec<f64>,
}

/// Image angle of a state at angle `theta` from the smallest right-singular vector,
/// inside the plane of the extreme singular vectors.
fn image_angle(kappa: f64, theta: f64) -> f64 {
    (kappa * theta.tan()).atan()
}

/// Placement `(theta_a, theta_b)` of a pair at angle `alpha` within the extreme singular plane.
///
/// The pair straddles the smallest right-singular vector, where the map stretches angles the
/// most. Symmetric placement is used unless its image would overshoot orthogonality, in which
/// case the pair is shifted so the images land orthogonal.
fn placement(kappa: f64, alpha: f64) -> (f64, f64) {
    let sep = |u: f64| image_angle(kappa, alpha - u) + image_angle(kappa, u);
    let half = 0.5 * alpha;
    if sep(half) <= FRAC_PI_2 {
        return (-half, half);
    }
    let (mut lo, mut hi) = (0.0, half);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sep(mid) < FRAC_PI_2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (-lo, alpha - lo)
}

/// Alternates an aligning unitary with `M` until the pair reaches trace distance `target`.
///
/// Each step places the pair in the plane spanned by `M`'s extreme right-singular vectors,
/// straddling the smallest one, then applies `M`. The realized distance after every step is
/// measured from the states themselves.
pub fn separate_states(m: &NonUnitaryMap, a: &PureState, b: &PureState, target: f64) -> Result<Separation> {
    for s in [a, b] {
        if s.dim() != m.dim() {
            return Err(Error::DimMismatch { expected: m.dim(), actual: s.dim() });
        }
    }
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::OutOfRange { value: target, range: "(0, 1]" });
    }
    let kappa = m.kappa();
    if m.delta() <= 1e-12 {
        return Err(Error::NoAmplification(kappa));
    }
    let start = a.trace_distance(b);
    if start <= 1e-15 {
        return Err(Error::NoAmplification(kappa));
    }
    let (lo, hi) = (m.min_input(), m.max_input());
    let dims = a.dims().to_vec();
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut out =
        Separation { iterations: 0, a: a.clone(), b: b.clone(), unitaries: Vec::new(), distances: vec![start] };
    let mut dist = start;
    while dist < target {
        if out.iterations >= SEPARATION_CAP {
            return Err(Error::IterationCap(SEPARATION_CAP));
        }
        let (ta, tb) = placement(kappa, a.angle(&b));
        let ta = PureState::new(dims.clone(), geodesic_point(&lo, &hi, ta))?;
        let tb = PureState::new(dims.clone(), geodesic_point(&lo, &hi, tb))?;
        let u = aligning_unitary(&a, &b, &ta, &tb)?;
        a = apply_map(m, &a.apply(&u)?)?;
        b = apply_map(m, &b.apply(&u)?)?;
        dist = a.trace_distance(&b);
        out.unitaries.push(u);
        out.distances.push(dist);
        out.iterations += 1;
    }
    out.a = a;
    out.b = b;
    Ok(out)
}

/// Verdict and cost of one run of single-query search.
#[derive(Debug, Clone, PartialEq)]
pub struct FspSearchOutcome {
    pub decision: SearchDecision,
    pub map_applications: usize,
    pub queries: usize,
    /// Probability that the final measurement names the true branch, given the preparation.
    pub discrimination: f64,
}

/// Decides whether `inst` has a marked item with one oracle query and repeated use of `M`.
///
/// The query leaves a qubit in `|psi_s>`; the two candidates `|psi_0>`, `|psi_1>` are
/// computed classically, the separating schedule for them is applied to the actual qubit,
/// and an optimal two-outcome measurement decides.
pub fn fsp_search<R: Rng + ?Sized>(
    inst: &mut SearchInstance,
    m: &NonUnitaryMap,
    rng: &mut R,
) -> Result<FspSearchOutcome> {
    if m.dim() != 2 {
        return Err(Error::DimMismatch { expected: 2, actual: m.dim() });
    }
    if m.delta() <= 1e-12 {
        return Err(Error::NoAmplification(m.kappa()));
    }
    let prep = inst.query_hadamard(rng)?;
    if !prep.register_zero {
        // Only a marked item can leave the index register away from 0...0.
        return Ok(FspSearchOutcome {
            decision: SearchDecision::OneSolution,
            map_applications: 0,
            queries: inst.queries(),
            discrimination: 1.0,
        });
    }
    let n = inst.n_items();
    let plan = separate_states(m, &answer_state(n, 0)?, &answer_state(n, 1)?, SEARCH_TARGET)?;
    let mut state = prep.answer;
    for u in &plan.unitaries {
        state = apply_map(m, &state.apply(u)?)?;
    }
    let basis = helstrom_basis(&plan.a, &plan.b)?;
    let (outcome, _) = measure(&state, &[0], &basis, rng)?;
    let decision = if outcome == 0 { SearchDecision::NoSolution } else { SearchDecision::OneSolution };
    let truth = if inst.solutions() == 0 { &plan.a } else { &plan.b };
    let expected = if inst.solutions() == 0 { 0 } else { 1 };
    let discrimination = truth.amps().dotc(&basis[expected]).norm_sqr();
    Ok(FspSearchOutcome { decision, map_applications: plan.iterations, queries: inst.queries(), discrimination })
}
