use crate::qcore::{svd, CMatrix, CVector, PureState, SvdData};
use crate::{Error, Result};

/// An invertible matrix `M` acting as `|s> -> M|s> / |M|s>|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonUnitaryMap {
    mat: CMatrix,
    svd: SvdData,
}

impl NonUnitaryMap {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimMismatch { expected: mat.nrows(), actual: mat.ncols() });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("map has non-finite entries".into()));
        }
        let svd = svd(&mat);
        if !svd.condition_number.is_finite() {
            return Err(Error::InvalidState("map is singular".into()));
        }
        Ok(Self { mat, svd })
    }

    /// `diag(values)`, convenient for maps with known singular structure.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(crate::qcore::gates::diag(values))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn svd(&self) -> &SvdData {
        &self.svd
    }

    /// Condition number `lambda_max / lambda_min`.
    pub fn kappa(&self) -> f64 {
        self.svd.condition_number
    }

    /// Deviation from unitarity, `kappa - 1`.
    pub fn delta(&self) -> f64 {
        self.kappa() - 1.0
    }

    pub fn lambda_min(&self) -> f64 {
        self.svd.smallest()
    }

    pub fn lambda_max(&self) -> f64 {
        self.svd.largest()
    }

    /// Right singular vector of the smallest singular value.
    pub fn min_input(&self) -> CVector {
        self.svd.right(self.dim() - 1)
    }

    /// Right singular vector of the largest singular value.
    pub fn max_input(&self) -> CVector {
        self.svd.right(0)
    }

    /// Left singular vector of the smallest singular value.
    pub fn min_output(&self) -> CVector {
        self.svd.left(self.dim() - 1)
    }

    /// Left singular vector of the largest singular value.
    pub fn max_output(&self) -> CVector {
        self.svd.left(0)
    }

    /// Applies the map to the listed subsystems of `s` and renormalizes.
    pub fn apply_on(&self, s: &PureState, targets: &[usize]) -> Result<PureState> {
        let v = s.apply_local_raw(targets, &self.mat)?;
        PureState::normalized(s.dims().to_vec(), v)
    }
}

/// `M|s> / |M|s>|`.
pub fn apply_map(m: &NonUnitaryMap, s: &PureState) -> Result<PureState> {
    if s.dim() != m.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), actual: s.dim() });
    }
    PureState::normalized(s.dims().to_vec(), m.matrix() * s.amps())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state, haar_unitary, C64};
    use crate::rng::trial_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_and_diagonal_action() {
        let id = NonUnitaryMap::new(CMatrix::identity(2, 2)).unwrap();
        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(apply_map(&id, &plus).unwrap(), plus);
        let m = NonUnitaryMap::diagonal(&[1.0, 2.0]).unwrap();
        let out = apply_map(&m, &plus).unwrap();
        let expect = PureState::from_real(&[1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(out.amp(0).re, 1.0 / 5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.fidelity(&expect), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.kappa(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.delta(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.min_input()[0].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unitary_maps_match_unitary_evolution() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..1000 {
            let u = haar_unitary(4, &mut rng);
            let s = haar_state(2, &mut rng).unwrap();
            let m = NonUnitaryMap::new(u.clone()).unwrap();
            let f = apply_map(&m, &s).unwrap().fidelity(&s.apply(&u).unwrap());
            assert!((f - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn rejects_singular_and_mismatched() {
        assert!(NonUnitaryMap::diagonal(&[1.0, 0.0]).is_err());
        assert!(NonUnitaryMap::new(CMatrix::zeros(2, 3)).is_err());
        let m = NonUnitaryMap::diagonal(&[1.0, 2.0]).unwrap();
        let s = PureState::zero_qubits(2).unwrap();
        assert!(matches!(apply_map(&m, &s), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn local_application() {
        let m = NonUnitaryMap::diagonal(&[1.0, 2.0]).unwrap();
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let out = m.apply_on(&bell, &[0]).unwrap();
        assert_abs_diff_eq!(out.amp(3).re, 2.0 / 5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(out.amp(1), C64::new(0.0, 0.0));
    }
}
