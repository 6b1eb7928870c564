//! Dense linear algebra for small Hilbert spaces.
//!
//! Subsystems are ordered most-significant first: for `dims = [d0, d1, ..]`
//! the flat index of `|i0, i1, ..>` is `((i0 * d1) + i1) * d2 + ..`.

mod density;
pub mod gates;
mod geometry;
mod haar;
mod measure;
mod state;
mod svd;

pub use density::{trace_distance, DensityMatrix};
pub use geometry::{aligning_unitary, geodesic_direction, geodesic_point, helstrom_basis};
pub use haar::{haar_state, haar_state_dims, haar_unitary};
pub use measure::{computational_basis, measure, measurement_branches, sample_index, Branch, PureEnsemble};
pub use state::{normalize, PureState};
pub use svd::{svd, SvdData};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Norms at or below this are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Tolerance for state invariants (norm, trace, hermiticity).
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_PURE_QUBITS: usize = 12;
pub const MAX_DENSITY_QUBITS: usize = 6;
pub const MAX_PURE_DIM: usize = 1 << MAX_PURE_QUBITS;
pub const MAX_DENSITY_DIM: usize = 1 << MAX_DENSITY_QUBITS;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

pub(crate) fn check_subsystems(dims: &[usize], targets: &[usize]) -> crate::Result<()> {
    for (k, &t) in targets.iter().enumerate() {
        if t >= dims.len() {
            return Err(crate::Error::BadSubsystem { index: t, count: dims.len() });
        }
        if targets[..k].contains(&t) {
            return Err(crate::Error::BadSubsystem { index: t, count: dims.len() });
        }
    }
    Ok(())
}

/// Flat offsets of every joint configuration of `targets` (in the order given),
/// plus the list of base indices whose target digits are all zero.
pub(crate) fn local_layout(dims: &[usize], targets: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let st = strides(dims);
    let total: usize = dims.iter().product();
    let mut offsets = vec![0usize];
    for &t in targets {
        let mut next = Vec::with_capacity(offsets.len() * dims[t]);
        for &o in &offsets {
            for d in 0..dims[t] {
                next.push(o + d * st[t]);
            }
        }
        offsets = next;
    }
    let bases = (0..total).filter(|&i| targets.iter().all(|&t| (i / st[t]).is_multiple_of(dims[t]))).collect();
    (offsets, bases)
}

/// Kronecker product of complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Full-space operator acting as `op` on `targets` and identity elsewhere.
/// Only meant for density-matrix sized spaces.
pub fn embed_operator(dims: &[usize], targets: &[usize], op: &CMatrix) -> crate::Result<CMatrix> {
    check_subsystems(dims, targets)?;
    let total: usize = dims.iter().product();
    if total > MAX_DENSITY_DIM {
        return Err(crate::Error::DimTooLarge { dim: total, max: MAX_DENSITY_DIM });
    }
    let (offsets, bases) = local_layout(dims, targets);
    if op.nrows() != offsets.len() || op.ncols() != offsets.len() {
        return Err(crate::Error::DimMismatch { expected: offsets.len(), actual: op.nrows() });
    }
    let mut full = CMatrix::zeros(total, total);
    for &b in &bases {
        for (r, &or) in offsets.iter().enumerate() {
            for (cidx, &oc) in offsets.iter().enumerate() {
                full[(b + or, b + oc)] = op[(r, cidx)];
            }
        }
    }
    Ok(full)
}

/// Whether `u` is square with `u^dagger u = 1` entrywise within `tol`.
pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let prod = u.adjoint() * u;
    let n = u.nrows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let target = if i == j { 1.0 } else { 0.0 };
            (prod[(i, j)] - C64::new(target, 0.0)).norm() <= tol
        })
    })
}

/// Completes the orthonormal columns `seed` to a full orthonormal basis of `C^dim`
/// by Gram-Schmidt against the computational basis.
pub fn complete_basis(seed: &[CVector], dim: usize) -> CMatrix {
    let mut cols: Vec<CVector> = seed.to_vec();
    let mut e = 0;
    while cols.len() < dim && e < dim {
        let mut v = CVector::zeros(dim);
        v[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for u in &cols {
                let p = u.dotc(&v);
                v -= u * p;
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            cols.push(v / C64::new(n, 0.0));
        }
        e += 1;
    }
    CMatrix::from_columns(&cols)
}
