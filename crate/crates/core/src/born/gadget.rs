use super::BornModel;
use crate::qcore::{c, gates, sample_index, CVector, DensityMatrix, PureState, C64};
use crate::search::{SearchDecision, SearchInstance};
use crate::{Error, Result};
use rand::Rng;

/// Measurement samples drawn by [`born_search`].
pub const SEARCH_SAMPLES: usize = 100;
/// Fraction of kept-branch samples above which [`born_search`] reports a solution.
const SEARCH_THRESHOLD: f64 = 0.25;
const MAX_ANCILLAS: usize = 1 << 20;

/// A class of computational-basis outcomes sharing a label: `multiplicity` outcomes, each
/// with the same amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedBranch {
    pub label: usize,
    pub amplitude: C64,
    pub multiplicity: f64,
}

/// Outcome classes of a state too large to materialize.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBranches {
    branches: Vec<WeightedBranch>,
}

impl WeightedBranches {
    pub fn new(branches: Vec<WeightedBranch>) -> Result<Self> {
        if branches.iter().any(|b| b.multiplicity.is_nan() || b.multiplicity <= 0.0) {
            return Err(Error::InvalidState("branch multiplicities must be positive".into()));
        }
        if branches.iter().all(|b| b.amplitude.norm() == 0.0) {
            return Err(Error::InvalidState("all branch amplitudes vanish".into()));
        }
        for (i, b) in branches.iter().enumerate() {
            if branches[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::InvalidState(format!("duplicate label {}", b.label)));
            }
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[WeightedBranch] {
        &self.branches
    }
}

/// Result of simulating postselection onto one label.
#[derive(Debug, Clone, PartialEq)]
pub struct Postselected {
    /// Labels in branch order.
    pub labels: Vec<usize>,
    /// Deformed-rule probability of each label after the ancillas are attached.
    pub probabilities: Vec<f64>,
    /// Total probability of labels other than the kept one.
    pub leakage: f64,
    /// `2^(-k |delta| / 2)`, the relative weight of the unwanted labels.
    pub suppression: f64,
    /// Normalized state over labels whose standard Born probabilities equal `probabilities`,
    /// carrying the phases of the input amplitudes.
    pub state: PureState,
}

/// Simulates postselecting onto `keep` by attaching `k` ancillas and Hadamards.
///
/// With `delta > 0` the Hadamards act on the unwanted branches, spreading each over `2^k`
/// outcomes of amplitude `2^(-k/2)` times the original, which scales its total deformed weight
/// by `2^(-k delta / 2)`. With `delta < 0` they act on the kept branch instead, scaling it
/// by `2^(k |delta| / 2)`. The ancilla register is accounted for analytically.
pub fn simulate_postselect(
    branches: &WeightedBranches,
    model: BornModel,
    k: usize,
    keep: usize,
) -> Result<Postselected> {
    model.require_nonzero()?;
    if k == 0 {
        return Err(Error::OutOfRange { value: 0.0, range: "k >= 1" });
    }
    let delta = model.delta();
    let log_factor = -(k as f64) * delta.abs() / 2.0;
    let suppression = log_factor.exp2();
    let masses: Vec<f64> = branches
        .branches
        .iter()
        .map(|b| {
            let m = b.multiplicity * model.weight(b.amplitude.norm());
            match (b.label == keep, delta > 0.0) {
                (false, true) => m * suppression,
                (true, false) => m * (-log_factor).exp2(),
                _ => m,
            }
        })
        .collect();
    let total: f64 = masses.iter().sum();
    let probabilities: Vec<f64> = masses.iter().map(|m| m / total).collect();
    let leakage = branches.branches.iter().zip(&probabilities).filter(|(b, _)| b.label != keep).map(|(_, p)| p).sum();
    let amps: CVector = branches
        .branches
        .iter()
        .zip(&probabilities)
        .map(|(b, p)| {
            let phase = if b.amplitude.norm() > 0.0 { b.amplitude / b.amplitude.norm() } else { c(1.0, 0.0) };
            phase * p.sqrt()
        })
        .collect::<Vec<_>>()
        .into();
    let state = PureState::normalized(vec![amps.len()], amps)?;
    Ok(Postselected {
        labels: branches.branches.iter().map(|b| b.label).collect(),
        probabilities,
        leakage,
        suppression,
        state,
    })
}

/// Teleportation where Alice forces her Bell outcome to `00` by simulated postselection.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    /// Fidelity of Bob's qubit with the input.
    pub fidelity: f64,
    pub leakage: f64,
    /// Ancillas used for the postselection.
    pub ancillas: usize,
}

/// Smallest `k` whose leakage is at most `2^(-n)`.
fn ancillas_for(branches: &WeightedBranches, model: BornModel, keep: usize, n: u32) -> Result<usize> {
    let goal = 2f64.powi(-(n as i32));
    let mut k = 1;
    while simulate_postselect(branches, model, k, keep)?.leakage > goal {
        k += 1;
        if k > MAX_ANCILLAS {
            return Err(Error::IterationCap(MAX_ANCILLAS));
        }
    }
    Ok(k)
}

/// Teleports `input` with no classical message: Alice postselects her Bell measurement onto
/// `00` with leakage at most `2^(-n)`, so Bob holds the input without any correction.
pub fn teleport_signal(model: BornModel, n: u32, input: &PureState) -> Result<TeleportOutcome> {
    model.require_nonzero()?;
    if input.dim() != 2 {
        return Err(Error::NotAQubit(0));
    }
    let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0])?;
    let joint = input.with_dims(vec![2])?.tensor(&bell)?;
    let rotated = joint.apply_local(&[0, 1], &gates::cnot())?.apply_local(&[0], &gates::hadamard())?;
    let mut bob_states = Vec::with_capacity(4);
    let mut branches = Vec::with_capacity(4);
    for outcome in 0..4 {
        let (_, v) = rotated.contract(&[0, 1], &PureState::basis(vec![2, 2], outcome)?)?;
        branches.push(WeightedBranch { label: outcome, amplitude: c(v.norm(), 0.0), multiplicity: 1.0 });
        bob_states.push(PureState::normalized(vec![2], v)?);
    }
    let branches = WeightedBranches::new(branches)?;
    let k = ancillas_for(&branches, model, 0, n)?;
    let post = simulate_postselect(&branches, model, k, 0)?;
    let members = post.probabilities.iter().copied().zip(bob_states).collect();
    let rho = DensityMatrix::from_ensemble(&crate::qcore::PureEnsemble::new(members)?)?;
    Ok(TeleportOutcome { fidelity: rho.fidelity_with(input), leakage: post.leakage, ancillas: k })
}

/// Verdict and cost of deformed-rule search.
#[derive(Debug, Clone, PartialEq)]
pub struct BornSearchOutcome {
    pub decision: SearchDecision,
    pub ancillas: usize,
    pub queries: usize,
    /// Probability of observing the `f = 1` label in one measurement.
    pub kept_probability: f64,
    /// Number of `f = 1` observations among the samples.
    pub kept_count: usize,
}

/// Ancillas used by [`born_search`] on `n` index qubits: `ceil(2n / |delta|) + 2`.
pub fn search_ancillas(n: usize, delta: f64) -> usize {
    (2.0 * n as f64 / delta.abs()).ceil() as usize + 2
}

/// Decides whether `inst` has a marked item with one query.
///
/// The query yields `2^(-n/2) sum_y |y>|f(y)>`; the `f = 1` label is amplified by simulated
/// postselection and the measurement is repeated [`SEARCH_SAMPLES`] times. A solution is
/// reported when at least a quarter of the samples show `f = 1`, which never happens
/// without one because that label then has zero amplitude.
pub fn born_search<R: Rng + ?Sized>(
    inst: &mut SearchInstance,
    model: BornModel,
    rng: &mut R,
) -> Result<BornSearchOutcome> {
    model.require_nonzero()?;
    let amp = c(2f64.powf(-(inst.n_qubits() as f64) / 2.0), 0.0);
    let branches: Vec<WeightedBranch> = inst
        .query_uniform()
        .into_iter()
        .filter(|&(mult, _)| mult > 0)
        .map(|(mult, bit)| WeightedBranch { label: bit as usize, amplitude: amp, multiplicity: mult as f64 })
        .collect();
    let k = search_ancillas(inst.n_qubits(), model.delta());
    let post = simulate_postselect(&WeightedBranches::new(branches)?, model, k, 1)?;
    let kept_probability =
        post.labels.iter().zip(&post.probabilities).filter(|(l, _)| **l == 1).map(|(_, p)| *p).sum::<f64>();
    let weights = [1.0 - kept_probability, kept_probability];
    let kept_count = (0..SEARCH_SAMPLES).filter(|_| sample_index(&weights, rng) == 1).count();
    let decision = if kept_count as f64 >= SEARCH_THRESHOLD * SEARCH_SAMPLES as f64 {
        SearchDecision::OneSolution
    } else {
        SearchDecision::NoSolution
    };
    Ok(BornSearchOutcome { decision, ancillas: k, queries: inst.queries(), kept_probability, kept_count })
}
