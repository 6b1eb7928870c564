use super::{check_subsystems, local_layout, CMatrix, CVector, C64, MAX_PURE_DIM, TOLERANCE, ZERO_THRESHOLD};
use crate::{Error, Result};

/// Normalized amplitude vector over a register of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: CVector,
}

/// Returns `v / |v|` as a single-subsystem state.
pub fn normalize(v: CVector) -> Result<PureState> {
    let d = v.len();
    PureState::normalized(vec![d], v)
}

impl PureState {
    /// Wraps an already normalized vector.
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        Self::check_dims(&dims, amps.len())?;
        let n = amps.norm();
        if (n - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("norm {n} is not 1")));
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes `v`; fails with `ZeroVector` when `|v| <= 1e-12`.
    pub fn normalized(dims: Vec<usize>, v: CVector) -> Result<Self> {
        Self::check_dims(&dims, v.len())?;
        let n = v.norm();
        if n.is_nan() || n <= ZERO_THRESHOLD {
            return Err(Error::ZeroVector { norm: n });
        }
        Ok(Self { dims, amps: v / C64::new(n, 0.0) })
    }

    fn check_dims(dims: &[usize], len: usize) -> Result<()> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || total != len {
            return Err(Error::DimMismatch { expected: total, actual: len });
        }
        if total > MAX_PURE_DIM {
            return Err(Error::DimTooLarge { dim: total, max: MAX_PURE_DIM });
        }
        Ok(())
    }

    pub fn from_amplitudes(dims: Vec<usize>, amps: &[C64]) -> Result<Self> {
        Self::normalized(dims, CVector::from_column_slice(amps))
    }

    /// Normalized state from real amplitudes on `n` qubits (or one subsystem when
    /// the length is not a power of two).
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        let v = CVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0)));
        let dims = qubit_dims_for(amps.len());
        Self::normalized(dims, v)
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total: usize = dims.iter().product();
        if index >= total {
            return Err(Error::OutOfRange { value: index as f64, range: "basis index < dimension" });
        }
        let mut v = CVector::zeros(total);
        v[index] = C64::new(1.0, 0.0);
        Self::new(dims, v)
    }

    /// `|0...0>` on `n` qubits.
    pub fn zero_qubits(n: usize) -> Result<Self> {
        Self::basis(vec![2; n], 0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn into_amps(self) -> CVector {
        self.amps
    }

    /// Same amplitudes regrouped into different subsystems.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::check_dims(&dims, self.amps.len())?;
        Ok(Self { dims, amps: self.amps.clone() })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Fubini-Study angle `acos |<a|b>|`, evaluated without cancellation for close states.
    pub fn angle(&self, other: &PureState) -> f64 {
        let ov = self.inner(other);
        let perp = (&other.amps - &self.amps * ov).norm();
        perp.atan2(ov.norm())
    }

    /// Trace distance between the two pure states, `sqrt(1 - |<a|b>|^2)`.
    pub fn trace_distance(&self, other: &PureState) -> f64 {
        self.angle(other).sin()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn conj(&self) -> PureState {
        Self { dims: self.dims.clone(), amps: self.amps.map(|a| a.conj()) }
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self.amps.kronecker(&other.amps);
        Self::check_dims(&dims, amps.len())?;
        Ok(Self { dims, amps })
    }

    /// Applies `op` to the listed subsystems without renormalizing.
    pub fn apply_local_raw(&self, targets: &[usize], op: &CMatrix) -> Result<CVector> {
        check_subsystems(&self.dims, targets)?;
        let (offsets, bases) = local_layout(&self.dims, targets);
        if op.nrows() != offsets.len() || op.ncols() != offsets.len() {
            return Err(Error::DimMismatch { expected: offsets.len(), actual: op.ncols() });
        }
        let mut out = CVector::zeros(self.amps.len());
        let mut local = CVector::zeros(offsets.len());
        for &b in &bases {
            for (k, &o) in offsets.iter().enumerate() {
                local[k] = self.amps[b + o];
            }
            let res = op * &local;
            for (k, &o) in offsets.iter().enumerate() {
                out[b + o] = res[k];
            }
        }
        Ok(out)
    }

    /// Applies `op` to the listed subsystems and renormalizes.
    pub fn apply_local(&self, targets: &[usize], op: &CMatrix) -> Result<PureState> {
        let v = self.apply_local_raw(targets, op)?;
        Self::normalized(self.dims.clone(), v)
    }

    /// Applies a full-register operator and renormalizes.
    pub fn apply(&self, op: &CMatrix) -> Result<PureState> {
        if op.ncols() != self.dim() || op.nrows() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: op.ncols() });
        }
        Self::normalized(self.dims.clone(), op * &self.amps)
    }

    /// Contracts `<onto|` against the listed subsystems. Returns the remaining
    /// subsystem dimensions and the unnormalized remaining vector.
    pub fn contract(&self, targets: &[usize], onto: &PureState) -> Result<(Vec<usize>, CVector)> {
        check_subsystems(&self.dims, targets)?;
        let (offsets, bases) = local_layout(&self.dims, targets);
        if onto.dim() != offsets.len() {
            return Err(Error::DimMismatch { expected: offsets.len(), actual: onto.dim() });
        }
        let rest_dims: Vec<usize> =
            (0..self.dims.len()).filter(|j| !targets.contains(j)).map(|j| self.dims[j]).collect();
        // Base indices enumerate the remaining subsystems in row-major order.
        let mut out = CVector::zeros(bases.len());
        for (r, &b) in bases.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &o) in offsets.iter().enumerate() {
                acc += onto.amps[k].conj() * self.amps[b + o];
            }
            out[r] = acc;
        }
        let rest_dims = if rest_dims.is_empty() { vec![1] } else { rest_dims };
        Ok((rest_dims, out))
    }

    /// Projects the listed subsystems onto `onto` and renormalizes what remains.
    pub fn postselect(&self, targets: &[usize], onto: &PureState) -> Result<PureState> {
        let (dims, v) = self.contract(targets, onto)?;
        Self::normalized(dims, v).map_err(|_| Error::ZeroOverlap)
    }
}

pub(crate) fn qubit_dims_for(len: usize) -> Vec<usize> {
    if len > 1 && len.is_power_of_two() {
        vec![2; len.trailing_zeros() as usize]
    } else {
        vec![len]
    }
}
