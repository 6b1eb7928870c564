use super::{apply_map, NonUnitaryMap};
use crate::channels::{capacity_closed_form, BinaryChannel};
use crate::qcore::{CMatrix, PureState, C64};
use crate::{Error, Result};
use rayon::prelude::*;

/// Largest list size the trace runner accepts.
pub const MAX_TRACE_ITEMS: usize = 64;

/// `(sqrt 2 - sqrt(2 - sqrt 2))^2`, the per-item distance floor for a search that succeeds
/// with probability at least 1/2.
pub fn eta() -> f64 {
    let r2 = 2f64.sqrt();
    (r2 - (2.0 - r2).sqrt()).powi(2)
}

/// One operation between oracle calls.
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Unitary(CMatrix),
    Map(NonUnitaryMap),
}

impl Instruction {
    fn apply(&self, s: &PureState) -> Result<PureState> {
        match self {
            Instruction::Unitary(u) => s.apply(u),
            Instruction::Map(m) => apply_map(m, s),
        }
    }
}

/// States of a query algorithm `S_q O_x ... S_1 O_x |psi_0>` for every marked item `x`,
/// together with the oracle-free run `S_q ... S_1 |psi_0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmTrace {
    /// `psi[x][k]` for `k = 0..=q`.
    pub psi: Vec<Vec<PureState>>,
    /// `phi[x][k - 1] = O_x psi[x][k - 1]` for `k = 1..=q`.
    pub phi: Vec<Vec<PureState>>,
    /// Oracle-free states for `k = 0..=q`.
    pub free: Vec<PureState>,
}

impl AlgorithmTrace {
    pub fn n_items(&self) -> usize {
        self.psi.len()
    }

    pub fn queries(&self) -> usize {
        self.free.len().saturating_sub(1)
    }

    /// `|<x|psi_q^x>|^2` for every `x`.
    pub fn success_probabilities(&self) -> Vec<f64> {
        self.psi.iter().enumerate().map(|(x, run)| run.last().map_or(0.0, |s| s.amp(x).norm_sqr())).collect()
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedTrace(m));
        let n = self.psi.len();
        let q = self.queries();
        if n == 0 || self.free.is_empty() {
            return bad("empty trace".into());
        }
        if self.phi.len() != n {
            return bad(format!("{} oracle-state runs for {n} items", self.phi.len()));
        }
        let dim = self.free[0].dim();
        if dim != n {
            return bad(format!("state dimension {dim} differs from list size {n}"));
        }
        for x in 0..n {
            if self.psi[x].len() != q + 1 || self.phi[x].len() != q {
                return bad(format!(
                    "run {x} has {} states and {} oracle states for {q} queries",
                    self.psi[x].len(),
                    self.phi[x].len()
                ));
            }
            if self.psi[x][0] != self.free[0] {
                return bad(format!("run {x} starts from a different state"));
            }
        }
        let all = self.psi.iter().flatten().chain(self.phi.iter().flatten()).chain(self.free.iter());
        for s in all {
            if s.dim() != dim {
                return bad("inconsistent state dimensions".into());
            }
            if (s.amps().norm() - 1.0).abs() > 1e-10 {
                return bad("unnormalized state".into());
            }
        }
        Ok(())
    }
}

/// Executes `steps` (one instruction list per query) for every marked item and without oracle.
///
/// The oracle is the phase flip `1 - 2|x><x|` applied before each step.
pub fn run_trace(initial: &PureState, steps: &[Vec<Instruction>]) -> Result<AlgorithmTrace> {
    let n = initial.dim();
    if n > MAX_TRACE_ITEMS {
        return Err(Error::DimTooLarge { dim: n, max: MAX_TRACE_ITEMS });
    }
    let run_step = |s: &PureState, step: &[Instruction]| step.iter().try_fold(s.clone(), |acc, ins| ins.apply(&acc));
    let runs: Vec<(Vec<PureState>, Vec<PureState>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut psi = vec![initial.clone()];
            let mut phi = Vec::with_capacity(steps.len());
            for step in steps {
                let mut v = psi.last().expect("nonempty").amps().clone();
                v[x] = -v[x];
                let flipped = PureState::new(initial.dims().to_vec(), v)?;
                psi.push(run_step(&flipped, step)?);
                phi.push(flipped);
            }
            Ok((psi, phi))
        })
        .collect::<Result<_>>()?;
    let mut free = vec![initial.clone()];
    for step in steps {
        free.push(run_step(free.last().expect("nonempty"), step)?);
    }
    let (psi, phi) = runs.into_iter().unzip();
    Ok(AlgorithmTrace { psi, phi, free })
}

/// Uniform start state and `q` Grover diffusion steps on `n_items` items.
pub fn grover_program(n_items: usize, q: usize) -> Result<(PureState, Vec<Vec<Instruction>>)> {
    let u = PureState::from_real(&vec![1.0; n_items])?;
    let diffusion = u.amps() * u.amps().adjoint() * C64::new(2.0, 0.0) - CMatrix::identity(n_items, n_items);
    Ok((u, vec![vec![Instruction::Unitary(diffusion)]; q]))
}

/// Hybrid-argument sums of a trace. Vectors are indexed by `k = 0..=q`; `c[0]` and `r[0]`
/// are zero placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridQuantities {
    /// `C_k = sum_x |phi_k^x - psi_{k-1}|^2`.
    pub c: Vec<f64>,
    /// `D_k = sum_x |psi_k^x - psi_k|^2`.
    pub d: Vec<f64>,
    /// `R_k = D_k - C_k`.
    pub r: Vec<f64>,
    /// `max_{k >= 1} R_k`.
    pub b: f64,
    /// `C_k <= D_{k-1} + 4 sqrt(D_{k-1}) + 4` for every `k >= 1`.
    pub c_recurrence_holds: bool,
    /// `D_k <= (4 + B) k^2` for every `k`.
    pub payoff_holds: bool,
    pub d0_is_zero: bool,
}

/// Computes `C_k`, `D_k`, `R_k` and `B` and evaluates the recurrence checks.
pub fn hybrid_quantities(trace: &AlgorithmTrace) -> Result<HybridQuantities> {
    trace.validate()?;
    let q = trace.queries();
    let dist2 = |a: &PureState, b: &PureState| (a.amps() - b.amps()).norm_squared();
    let d: Vec<f64> = (0..=q).map(|k| trace.psi.iter().map(|run| dist2(&run[k], &trace.free[k])).sum()).collect();
    let mut c = vec![0.0; q + 1];
    let mut r = vec![0.0; q + 1];
    for k in 1..=q {
        c[k] = trace.phi.iter().map(|run| dist2(&run[k - 1], &trace.free[k - 1])).sum();
        r[k] = d[k] - c[k];
    }
    let b = if q == 0 { 0.0 } else { r[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max) };
    let slack = |v: f64| v * (1.0 + 1e-9) + 1e-12;
    let c_recurrence_holds = (1..=q).all(|k| c[k] <= slack(d[k - 1] + 4.0 * d[k - 1].sqrt() + 4.0));
    let payoff_holds = (0..=q).all(|k| d[k] <= slack((4.0 + b) * (k * k) as f64));
    Ok(HybridQuantities { c, d0_is_zero: d[0] == 0.0, d, r, b, c_recurrence_holds, payoff_holds })
}

/// `eta / (2 q^2) - 2 / N`.
pub fn speedup_epsilon(q: usize, n_items: u64) -> f64 {
    eta() / (2.0 * (q * q) as f64) - 2.0 / n_items as f64
}

/// Capacity of the channel `(1/2, 1/2 - eps/8)` that a `q`-query search over `N` items
/// certifies; zero when `eps <= 0`.
pub fn speedup_capacity_bound(q: usize, n_items: u64) -> f64 {
    let eps = speedup_epsilon(q.max(1), n_items);
    if eps <= 0.0 {
        return 0.0;
    }
    capacity_closed_form(BinaryChannel { eps0: 0.5, eps1: 0.5 - eps / 8.0 })
}
