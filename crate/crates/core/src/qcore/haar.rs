use rand::Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector, PureState, C64, MAX_PURE_QUBITS};
use crate::{Error, Result};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on `n_qubits` qubits (normalized complex Gaussian vector).
pub fn haar_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
    if n_qubits == 0 || n_qubits > MAX_PURE_QUBITS {
        return Err(Error::DimTooLarge { dim: n_qubits, max: MAX_PURE_QUBITS });
    }
    haar_state_dims(vec![2; n_qubits], rng)
}

/// Haar-random pure state over arbitrary subsystem dimensions.
pub fn haar_state_dims<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<PureState> {
    let d: usize = dims.iter().product();
    let v = CVector::from_iterator(d, (0..d).map(|_| gaussian(rng)));
    PureState::normalized(dims, v)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase correction on R's diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / C64::new(rjj.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}
