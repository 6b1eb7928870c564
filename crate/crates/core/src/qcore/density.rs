use super::{
    check_subsystems, embed_operator, strides, CMatrix, PureEnsemble, PureState, C64, MAX_DENSITY_DIM, TOLERANCE,
};
use crate::{Error, Result};

/// Hermitian, positive semidefinite, unit-trace matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity (all within 1e-10).
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        let rho = Self::unchecked(dims, mat)?;
        rho.validate()?;
        Ok(rho)
    }

    fn unchecked(dims: Vec<usize>, mat: CMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimMismatch { expected: total, actual: mat.nrows() });
        }
        if total > MAX_DENSITY_DIM {
            return Err(Error::DimTooLarge { dim: total, max: MAX_DENSITY_DIM });
        }
        Ok(Self { dims, mat })
    }

    fn validate(&self) -> Result<()> {
        let n = self.mat.nrows();
        for i in 0..n {
            for j in 0..n {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > TOLERANCE {
                    return Err(Error::InvalidState("matrix is not Hermitian".into()));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -TOLERANCE {
                return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        let v = psi.amps();
        Self::unchecked(psi.dims().to_vec(), v * v.adjoint())
    }

    /// Probability-weighted sum of the ensemble members' projectors.
    pub fn from_ensemble(ens: &PureEnsemble) -> Result<Self> {
        let first = ens.members().first().ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
        let dims = first.1.dims().to_vec();
        let d = first.1.dim();
        let mut mat = CMatrix::zeros(d, d);
        for (p, s) in ens.members() {
            if s.dim() != d {
                return Err(Error::DimMismatch { expected: d, actual: s.dim() });
            }
            mat += s.amps() * s.amps().adjoint() * C64::new(*p, 0.0);
        }
        Self::unchecked(dims, mat)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        Self::unchecked(dims, CMatrix::identity(d, d) / C64::new(d as f64, 0.0))
    }

    /// Single-qubit matrix from its four entries, validated.
    pub fn qubit(r00: C64, r01: C64, r10: C64, r11: C64) -> Result<Self> {
        Self::new(vec![2], CMatrix::from_row_slice(2, 2, &[r00, r01, r10, r11]))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.mat.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with(&self, psi: &PureState) -> f64 {
        psi.amps().dotc(&(&self.mat * psi.amps())).re
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::unchecked(dims, self.mat.kronecker(&other.mat))
    }

    /// Reduced state on `keep` (kept in ascending subsystem order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_subsystems(&self.dims, keep)?;
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let traced: Vec<usize> = (0..self.dims.len()).filter(|j| !keep.contains(j)).collect();
        let st = strides(&self.dims);
        let kdims: Vec<usize> = keep.iter().map(|&j| self.dims[j]).collect();
        let kd: usize = kdims.iter().product();
        let kst = strides(&kdims);
        let tdims: Vec<usize> = traced.iter().map(|&j| self.dims[j]).collect();
        let td: usize = tdims.iter().product();
        let tst = strides(&tdims);
        // full index from (kept index, traced index)
        let full = |ki: usize, ti: usize| -> usize {
            let mut idx = 0;
            for (p, &j) in keep.iter().enumerate() {
                idx += ((ki / kst[p]) % kdims[p]) * st[j];
            }
            for (p, &j) in traced.iter().enumerate() {
                idx += ((ti / tst[p]) % tdims[p]) * st[j];
            }
            idx
        };
        let mut out = CMatrix::zeros(kd, kd);
        for a in 0..kd {
            for b in 0..kd {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.mat[(full(a, t), full(b, t))];
                }
                out[(a, b)] = acc;
            }
        }
        let kdims = if kdims.is_empty() { vec![1] } else { kdims };
        Self::unchecked(kdims, out)
    }

    /// `U rho U^dagger` with `op` acting on `targets`.
    pub fn apply_unitary(&self, targets: &[usize], op: &CMatrix) -> Result<DensityMatrix> {
        let full = embed_operator(&self.dims, targets, op)?;
        Self::unchecked(self.dims.clone(), &full * &self.mat * full.adjoint())
    }
}

/// Trace distance `1/2 |a - b|_1`, computed from the eigenvalues of the difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { expected: a.dim(), actual: b.dim() });
    }
    let diff = &a.mat - &b.mat;
    let s: f64 = diff.symmetric_eigenvalues().iter().map(|e| e.abs()).sum();
    Ok((0.5 * s).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{gates, haar_state_dims, CVector};
    use crate::rng::trial_rng;
    use approx::assert_abs_diff_eq;

    fn ket(v: &[f64]) -> PureState {
        PureState::from_real(v).unwrap()
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let rho = DensityMatrix::from_pure(&ket(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let zero = DensityMatrix::from_pure(&ket(&[1.0, 0.0])).unwrap();
        for keep in [0, 1] {
            let r = rho.partial_trace(&[keep]).unwrap();
            assert_abs_diff_eq!(max_abs(&(r.matrix() - zero.matrix())), 0.0);
        }
        let bell = DensityMatrix::from_pure(&ket(&[1.0, 0.0, 0.0, 1.0])).unwrap();
        let half = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        for keep in [0, 1] {
            let r = bell.partial_trace(&[keep]).unwrap();
            assert_abs_diff_eq!(max_abs(&(r.matrix() - half.matrix())), 0.0, epsilon = 1e-15);
        }
        assert!(matches!(bell.partial_trace(&[2]), Err(Error::BadSubsystem { .. })));
    }

    #[test]
    fn partial_trace_after_nonunitary_map() {
        // (|0>|0> + |1>|1>)/sqrt2 with diag(1,2) on the first factor:
        // Bob keeps diag(1/5, 4/5).
        let bell = ket(&[1.0, 0.0, 0.0, 1.0]);
        let out = bell.apply_local(&[0], &gates::diag(&[1.0, 2.0])).unwrap();
        let r = DensityMatrix::from_pure(&out).unwrap().partial_trace(&[1]).unwrap();
        assert_abs_diff_eq!(r.entry(0, 0).re, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.entry(1, 1).re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.entry(0, 1).norm(), 0.0);
    }

    #[test]
    fn partial_trace_of_random_products() {
        for t in 0..20 {
            let mut rng = trial_rng(99, t);
            let a = haar_state_dims(vec![2, 3], &mut rng).unwrap();
            let b = haar_state_dims(vec![2], &mut rng).unwrap();
            let ra = DensityMatrix::from_pure(&a).unwrap();
            let rb = DensityMatrix::from_pure(&b).unwrap();
            let joint = ra.tensor(&rb).unwrap();
            let back = joint.partial_trace(&[0, 1]).unwrap();
            assert!(max_abs(&(back.matrix() - ra.matrix())) <= 1e-12);
            let back_b = joint.partial_trace(&[2]).unwrap();
            assert!(max_abs(&(back_b.matrix() - rb.matrix())) <= 1e-12);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let z = DensityMatrix::from_pure(&ket(&[1.0, 0.0])).unwrap();
        let o = DensityMatrix::from_pure(&ket(&[0.0, 1.0])).unwrap();
        let p = DensityMatrix::from_pure(&ket(&[1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(trace_distance(&z, &z).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&z, &o).unwrap(), 1.0, epsilon = 1e-15);
        // eigenvalues of |0><0| - |+><+| are +-1/(2 sqrt 2)... times 2 -> 1/sqrt2
        assert_abs_diff_eq!(trace_distance(&z, &p).unwrap(), 0.5f64.sqrt(), epsilon = 1e-14);
        let big = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!(matches!(trace_distance(&z, &big), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.4, 0.0)],
        );
        assert!(DensityMatrix::new(vec![2], m).is_err());
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.5, 0.0)],
        );
        assert!(DensityMatrix::new(vec![2], m).is_err());
        let mut v = CVector::zeros(2);
        v[0] = C64::new(1.0, 0.0);
        assert!(DensityMatrix::new(vec![2], &v * v.adjoint()).is_ok());
    }
}
