//! Unstructured search instances with query accounting.

use crate::qcore::{c, DensityMatrix, PureState, C64};
use crate::{Error, Result};
use rand::Rng;

/// Largest register handled analytically.
pub const MAX_SEARCH_QUBITS: usize = 30;

/// A list of `N = 2^n` items with zero or one marked item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    n_qubits: usize,
    marked: Option<u64>,
    queries: usize,
}

/// Outcome of querying the uniform superposition, applying Hadamards to the index
/// register and measuring it.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardPrep {
    /// Whether the index register was found in `|0...0>`.
    pub register_zero: bool,
    /// Post-measurement state of the answer qubit.
    pub answer: PureState,
}

impl SearchInstance {
    pub fn new(n_qubits: usize, marked: Option<u64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_SEARCH_QUBITS {
            return Err(Error::BadInstance(format!("{n_qubits} index qubits")));
        }
        if let Some(m) = marked {
            if m >= 1u64 << n_qubits {
                return Err(Error::BadInstance(format!("marked item {m} outside a list of 2^{n_qubits}")));
            }
        }
        Ok(Self { n_qubits, marked, queries: 0 })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_items(&self) -> u64 {
        1u64 << self.n_qubits
    }

    /// Number of oracle queries made so far.
    pub fn queries(&self) -> usize {
        self.queries
    }

    /// Number of marked items (0 or 1). Intended for scoring, not for algorithms.
    pub fn solutions(&self) -> u64 {
        u64::from(self.marked.is_some())
    }

    /// Classical query `f(x)`.
    pub fn query(&mut self, x: u64) -> bool {
        self.queries += 1;
        self.marked == Some(x)
    }

    /// One bit-flip query on `2^{-n/2} sum_y |y>|0>`, returning the pair of answer-register
    /// branches `(multiplicity, answer bit)` of `2^{-n/2} sum_y |y>|f(y)>`.
    ///
    /// Every branch carries amplitude `2^{-n/2}`; only the multiplicities depend on `f`.
    pub fn query_uniform(&mut self) -> [(u64, u8); 2] {
        self.queries += 1;
        let s = self.solutions();
        [(self.n_items() - s, 0), (s, 1)]
    }

    /// One query on the uniform superposition, then Hadamards on the index register and a
    /// computational-basis measurement of it.
    ///
    /// The register reads `0...0` with probability `((N-s)^2 + s^2) / N^2`, leaving the
    /// answer qubit in `((N-s)|0> + s|1>) / norm`. Any other reading leaves `(|1> - |0>)/sqrt 2`
    /// up to phase, which only happens when `s = 1`.
    pub fn query_hadamard<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<HadamardPrep> {
        self.queries += 1;
        let n = self.n_items() as f64;
        let s = self.solutions() as f64;
        let p_zero = ((n - s).powi(2) + s * s) / (n * n);
        if rng.random::<f64>() < p_zero {
            Ok(HadamardPrep { register_zero: true, answer: answer_state(self.n_items(), self.solutions())? })
        } else {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            Ok(HadamardPrep { register_zero: false, answer: PureState::from_real(&[-h, h])? })
        }
    }

    /// One query on the uniform superposition followed by a Hadamard on the answer qubit;
    /// returns the reduced state of the answer qubit.
    ///
    /// This is `|+><+|` without a solution and `(1 - 1/N)|+><+| + (1/N)|-><-|` with one.
    pub fn query_answer_mixed(&mut self) -> Result<DensityMatrix> {
        self.queries += 1;
        let eps = self.solutions() as f64 / self.n_items() as f64;
        let off = c(0.5 - eps, 0.0);
        DensityMatrix::qubit(c(0.5, 0.0), off, off, c(0.5, 0.0))
    }
}

/// `((N-s)|0> + s|1>) / sqrt((N-s)^2 + s^2)`, the answer qubit conditioned on the index
/// register reading `0...0`.
pub fn answer_state(n_items: u64, s: u64) -> Result<PureState> {
    let (n, s) = (n_items as f64, s as f64);
    PureState::normalized(vec![2], crate::qcore::CVector::from_vec(vec![C64::new(n - s, 0.0), C64::new(s, 0.0)]))
}

/// A search algorithm's verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchDecision {
    NoSolution,
    OneSolution,
}

impl SearchDecision {
    pub fn solutions(self) -> u64 {
        match self {
            SearchDecision::NoSolution => 0,
            SearchDecision::OneSolution => 1,
        }
    }
}
