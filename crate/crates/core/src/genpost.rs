//! Postselection onto a fixed generic state, and how it simulates postselection onto `|0>`.

use crate::qcore::{gates, haar_state, CMatrix, CVector, DensityMatrix, PureState, C64};
use crate::rng::par_trials;
use crate::{Error, Result};
use rand::Rng;

/// Largest register the postselector may act on.
pub const MAX_POSTSELECT_QUBITS: usize = 6;
const MAX_OVERLAP_QUBITS: usize = 10;

/// Postselection onto one fixed `n`-qubit state, reused on every invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPostselector {
    psi: PureState,
}

impl GenericPostselector {
    pub fn new(psi: PureState) -> Result<Self> {
        let n = psi.dims().len();
        if psi.dims().iter().any(|&d| d != 2) {
            return Err(Error::InvalidState("postselection target must be a qubit register".into()));
        }
        if n > MAX_POSTSELECT_QUBITS {
            return Err(Error::DimTooLarge { dim: n, max: MAX_POSTSELECT_QUBITS });
        }
        Ok(Self { psi })
    }

    pub fn from_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new(haar_state(n, rng)?)
    }

    pub fn psi(&self) -> &PureState {
        &self.psi
    }

    pub fn n(&self) -> usize {
        self.psi.dims().len()
    }

    /// `<psi|` contracted against `targets` of `state`.
    pub fn project(&self, state: &PureState, targets: &[usize]) -> Result<(Vec<usize>, CVector)> {
        state.contract(targets, &self.psi)
    }
}

/// What to postselect the second half of the maximally entangled state onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extraction {
    /// Onto `psi` itself, which leaves `psi*` behind.
    Naive,
    /// Onto `psi*`, which leaves `psi` behind.
    Exact,
}

/// Prepares `sum_x |x>|x>` on `2n` qubits and postselects the second register.
pub fn extract_copy(g: &GenericPostselector, mode: Extraction) -> Result<PureState> {
    let n = g.n();
    let dim = 1usize << n;
    let mut amps = CVector::zeros(dim * dim);
    for x in 0..dim {
        amps[x * dim + x] = C64::new(1.0, 0.0);
    }
    let phi = PureState::normalized(vec![2; 2 * n], amps)?;
    let onto = match mode {
        Extraction::Naive => g.psi.clone(),
        Extraction::Exact => g.psi.conj(),
    };
    let second: Vec<usize> = (n..2 * n).collect();
    phi.postselect(&second, &onto)
}

/// Operator applied to one copy of `psi` to make the nearly orthogonal partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetMode {
    /// `sigma_x` on the first qubit.
    SigmaX,
    /// `Z` on the first qubit.
    ZI,
}

impl GadgetMode {
    fn partner(self, psi: &PureState) -> Result<PureState> {
        let op = match self {
            GadgetMode::SigmaX => gates::pauli_x(),
            GadgetMode::ZI => gates::pauli_z(),
        };
        psi.apply_local(&[0], &op)
    }
}

/// Output of [`gadget_postselect_zero`].
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetOutput {
    /// Renormalized state of the input register (the discarded register traced out).
    pub state: DensityMatrix,
    /// Weight left on `|1>` of the designated qubit.
    pub residual_weight: f64,
    /// Amplitude factor applied to the `|1>` branch relative to the `|0>` branch.
    pub leak_amplitude: f64,
    /// Probability of the postselected event.
    pub success_probability: f64,
}

/// Controlled on `designated`, swaps a register holding `psi'` with one holding `psi`,
/// postselects the second onto `psi` and discards the first.
///
/// Both copies of `psi` are produced by [`extract_copy`]. The `|1>` branch survives with
/// amplitude `<psi|psi'>`, so for generic `psi` this approximates projecting `designated`
/// onto `|0>`.
pub fn gadget_postselect_zero(
    g: &GenericPostselector,
    input: &PureState,
    designated: usize,
    mode: GadgetMode,
) -> Result<GadgetOutput> {
    let m = input.dims().len();
    if designated >= m {
        return Err(Error::BadSubsystem { index: designated, count: m });
    }
    if input.dims()[designated] != 2 {
        return Err(Error::NotAQubit(input.dims()[designated]));
    }
    let copy = extract_copy(g, Extraction::Exact)?;
    let partner = mode.partner(&extract_copy(g, Extraction::Exact)?)?;
    // Per value of the control: (input branch, discarded register, postselected register).
    let branches = [(0usize, &partner, &copy), (1usize, &copy, &partner)];
    let mut parts: Vec<(CVector, &PureState, C64)> = Vec::with_capacity(2);
    for (v, kept, bottom) in branches {
        let proj = gates::projector(&gates::identity(2).column(v).into_owned());
        let x = input.apply_local_raw(&[designated], &proj)?;
        let (_, amp) = g.project(bottom, &(0..g.n()).collect::<Vec<_>>())?;
        parts.push((x, kept, amp[0]));
    }
    let d = input.dim();
    let mut rho = CMatrix::zeros(d, d);
    for (xv, mv, cv) in &parts {
        for (xw, mw, cw) in &parts {
            let coherence = *cv * cw.conj() * mw.inner(mv);
            rho += (xv * xw.adjoint()) * coherence;
        }
    }
    let success_probability = rho.trace().re;
    if success_probability <= 1e-300 {
        return Err(Error::ZeroOverlap);
    }
    rho /= C64::new(success_probability, 0.0);
    let state = DensityMatrix::new(input.dims().to_vec(), rho)?;
    let residual_weight = state.partial_trace(&[designated])?.entry(1, 1).re;
    let leak_amplitude = parts[1].2.norm() / parts[0].2.norm();
    Ok(GadgetOutput { state, residual_weight, leak_amplitude, success_probability })
}

/// Monte Carlo estimate of `E |<psi|O|psi>|^2` over Haar `psi` against the exact `1/(N+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapEstimate {
    pub n: usize,
    pub samples: usize,
    /// Sample mean of `|<psi|O|psi>|^2`.
    pub mc: f64,
    pub exact: f64,
    pub std_error: f64,
    /// `(mc - exact) / std_error`.
    pub z: f64,
    /// Sample mean of `|<psi|O|psi>|`, for comparison with `sqrt(exact)`.
    pub mean_abs: f64,
}

/// Estimates the mean squared overlap between a Haar state and its partner under `mode`.
pub fn haar_rms_overlap<R: Rng + ?Sized>(
    n: usize,
    samples: usize,
    mode: GadgetMode,
    rng: &mut R,
) -> Result<OverlapEstimate> {
    if n == 0 || n > MAX_OVERLAP_QUBITS {
        return Err(Error::OutOfRange { value: n as f64, range: "1 <= n <= 10" });
    }
    if samples < 2 {
        return Err(Error::OutOfRange { value: samples as f64, range: "samples >= 2" });
    }
    let overlaps = par_trials(rng.random(), samples, |_, r| -> Result<f64> {
        let psi = haar_state(n, r)?;
        Ok(psi.inner(&mode.partner(&psi)?).norm())
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let k = samples as f64;
    let sq: Vec<f64> = overlaps.iter().map(|o| o * o).collect();
    let mc = sq.iter().sum::<f64>() / k;
    let var = sq.iter().map(|s| (s - mc).powi(2)).sum::<f64>() / (k - 1.0);
    let std_error = (var / k).sqrt();
    let big_n = (1u64 << n) as f64;
    let exact = (big_n - 1.0) / (big_n * big_n - 1.0);
    Ok(OverlapEstimate {
        n,
        samples,
        mc,
        exact,
        std_error,
        z: (mc - exact) / std_error,
        mean_abs: overlaps.iter().sum::<f64>() / k,
    })
}
