use crate::channels::BinaryChannel;
use crate::qcore::{
    c, computational_basis, gates, measurement_branches, sample_index, trace_distance, CMatrix, DensityMatrix,
    PureState,
};
use crate::search::{SearchDecision, SearchInstance};
use crate::{Error, Result};
use rand::Rng;

/// Appends a copy of the reduced state of qubit `target` as a new last qubit.
///
/// The original position keeps its correlations with the rest; the copy is uncorrelated.
pub fn clone(rho: &DensityMatrix, target: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(Error::BadSubsystem { index: target, count: dims.len() });
    }
    if dims[target] != 2 {
        return Err(Error::NotAQubit(dims[target]));
    }
    rho.tensor(&rho.partial_trace(&[target])?)
}

fn require_qubit(rho: &DensityMatrix) -> Result<()> {
    match rho.dims() {
        [2] => Ok(()),
        _ => Err(Error::NotAQubit(rho.dim())),
    }
}

/// Closed form of clone, CNOT from original onto copy, discard the copy:
/// `M(rho)_ij = rho_ij (rho_ij + rho_{1-i,1-j})`.
pub fn cnot_clone_map(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_qubit(rho)?;
    let r = |i: usize, j: usize| rho.entry(i, j);
    let m = CMatrix::from_fn(2, 2, |i, j| r(i, j) * (r(i, j) + r(1 ^ i, 1 ^ j)));
    DensityMatrix::new(vec![2], m)
}

/// The same map built from the circuit: [`clone`], CNOT, partial trace.
pub fn cnot_clone_gadget(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_qubit(rho)?;
    clone(rho, 0)?.apply_unitary(&[0, 1], &gates::cnot())?.partial_trace(&[0])
}

/// Result of [`clone_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct CloneSearchOutcome {
    pub decision: SearchDecision,
    pub iterations: usize,
    pub queries: usize,
    /// Number of `|->` outcomes among the samples.
    pub minus_count: usize,
    /// Trace distance of the final answer qubit from `|+><+|`.
    pub distance_from_plus: f64,
}

/// Measurements of the final answer qubit in the `|+>, |->` basis.
pub const CLONE_SEARCH_SAMPLES: usize = 100;
/// Fraction of `|->` outcomes at which a solution is declared.
pub const CLONE_SEARCH_THRESHOLD: f64 = 0.2;
const MAX_CLONE_SEARCH_QUBITS: usize = 24;

/// Decides whether the instance has a marked item with one query.
///
/// The answer qubit is `|+><+|` without a solution and drifts away from it under repeated
/// application of [`cnot_clone_map`] otherwise; `n + 3` applications push it to near
/// maximal mixing, after which sampling in the `+/-` basis separates the cases.
pub fn clone_search<R: Rng + ?Sized>(inst: &mut SearchInstance, rng: &mut R) -> Result<CloneSearchOutcome> {
    let n = inst.n_qubits();
    if n > MAX_CLONE_SEARCH_QUBITS {
        return Err(Error::BadInstance(format!("{n} qubits exceeds {MAX_CLONE_SEARCH_QUBITS}")));
    }
    let mut rho = inst.query_answer_mixed()?;
    let iterations = n + 3;
    for _ in 0..iterations {
        rho = cnot_clone_map(&rho)?;
    }
    let plus = PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2])?;
    let distance_from_plus = trace_distance(&rho, &DensityMatrix::from_pure(&plus)?)?;
    let p_minus = (1.0 - rho.fidelity_with(&plus)).clamp(0.0, 1.0);
    let minus_count = (0..CLONE_SEARCH_SAMPLES).filter(|_| rng.random::<f64>() < p_minus).count();
    let decision = if minus_count as f64 >= CLONE_SEARCH_THRESHOLD * CLONE_SEARCH_SAMPLES as f64 {
        SearchDecision::OneSolution
    } else {
        SearchDecision::NoSolution
    };
    Ok(CloneSearchOutcome { decision, iterations, queries: inst.queries(), minus_count, distance_from_plus })
}

/// Bob's states in the cloning signaling protocol, as ensembles of single-qubit density
/// matrices: with Alice's half of an EPR pair measured (input 1) or untouched (input 0).
fn bob_ensemble(measured: bool) -> Result<Vec<(f64, DensityMatrix)>> {
    let epr = PureState::from_real(&[std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0, std::f64::consts::FRAC_1_SQRT_2])?;
    if measured {
        measurement_branches(&epr, &[0], &computational_basis(2))?
            .into_iter()
            .filter(|b| b.probability > 0.0)
            .map(|b| Ok((b.probability, DensityMatrix::from_pure(&b.state)?.partial_trace(&[1])?)))
            .collect()
    } else {
        Ok(vec![(1.0, DensityMatrix::from_pure(&epr)?.partial_trace(&[1])?)])
    }
}

fn all_equal_probability(rho: &DensityMatrix, k: u32) -> f64 {
    let d = rho.diagonal();
    d[0].powi(k as i32) + d[1].powi(k as i32)
}

fn require_copies(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::OutOfRange { value: 0.0, range: "k >= 1" });
    }
    Ok(())
}

/// Exact channel of the cloning signaling protocol with `k` measured copies (the original
/// plus `k - 1` clones). Bob outputs 1 iff all `k` outcomes agree.
pub fn clone_signal_channel(k: u32) -> Result<BinaryChannel> {
    require_copies(k)?;
    let p = |measured| -> Result<f64> {
        let total: f64 = bob_ensemble(measured)?.iter().map(|(w, rho)| w * all_equal_probability(rho, k)).sum();
        Ok(total.clamp(0.0, 1.0))
    };
    BinaryChannel::new(p(false)?, 1.0 - p(true)?)
}

/// Sampled run of the cloning signaling protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneSignalTrials {
    pub copies: u32,
    pub trials: usize,
    /// Fraction of all-equal outcomes when Alice did not measure.
    pub unmeasured_all_equal: f64,
    /// Fraction of all-equal outcomes when Alice measured.
    pub measured_all_equal: f64,
    /// Channel estimated from the frequencies.
    pub estimated: BinaryChannel,
    pub exact: BinaryChannel,
}

/// Runs `trials` shots of each branch of the cloning signaling protocol.
pub fn clone_signal<R: Rng + ?Sized>(k: u32, trials: usize, rng: &mut R) -> Result<CloneSignalTrials> {
    require_copies(k)?;
    if trials == 0 {
        return Err(Error::OutOfRange { value: 0.0, range: "trials >= 1" });
    }
    let mut frequency = |measured: bool| -> Result<f64> {
        let ensemble = bob_ensemble(measured)?;
        let weights: Vec<f64> = ensemble.iter().map(|(w, _)| *w).collect();
        let mut hits = 0usize;
        for _ in 0..trials {
            let rho = &ensemble[sample_index(&weights, rng)].1;
            let p1 = rho.diagonal()[1];
            let first = rng.random::<f64>() < p1;
            if (1..k).all(|_| (rng.random::<f64>() < p1) == first) {
                hits += 1;
            }
        }
        Ok(hits as f64 / trials as f64)
    };
    let unmeasured_all_equal = frequency(false)?;
    let measured_all_equal = frequency(true)?;
    Ok(CloneSignalTrials {
        copies: k,
        trials,
        unmeasured_all_equal,
        measured_all_equal,
        estimated: BinaryChannel::new(unmeasured_all_equal, 1.0 - measured_all_equal)?,
        exact: clone_signal_channel(k)?,
    })
}

/// Single-qubit state `|+><+|` with off-diagonal lowered by `eps`.
pub fn rho_eps(eps: f64) -> Result<DensityMatrix> {
    let off = c(0.5 - eps, 0.0);
    DensityMatrix::qubit(c(0.5, 0.0), off, off, c(0.5, 0.0))
}
