use crate::qcore::{trace_distance, CVector, DensityMatrix, PureState, C64};
use crate::{Error, Result};

/// Applies the rule `S0 |a> -> |0>` termwise to a two-party state written as
/// `sum_i |e_i> (<e_i| x I)|psi>` in the first-factor basis `basis`.
pub fn naive_collapse(state: &PureState, basis: &[CVector]) -> Result<PureState> {
    if state.dims().len() != 2 {
        return Err(Error::InvalidState(format!("expected two factors, got {}", state.dims().len())));
    }
    let d0 = state.dims()[0];
    if basis.len() != d0 {
        return Err(Error::BadBasis(format!("{} vectors for a {d0}-dimensional factor", basis.len())));
    }
    let mut second = CVector::zeros(state.dims()[1]);
    for e in basis {
        let onto = PureState::new(vec![d0], e.clone())?;
        second += state.contract(&[0], &onto)?.1;
    }
    let second = PureState::normalized(vec![state.dims()[1]], second).map_err(|_| Error::ZeroOverlap)?;
    PureState::basis(vec![d0], 0)?.tensor(&second)
}

/// Two readings of one state under the termwise rule and their distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Ambiguity {
    pub computational: PureState,
    pub hadamard: PureState,
    /// Trace distance between the second factors.
    pub distance: f64,
}

fn hadamard_basis() -> [CVector; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        CVector::from_vec(vec![C64::new(h, 0.0), C64::new(h, 0.0)]),
        CVector::from_vec(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]),
    ]
}

/// Collapses the first qubit of a two-qubit state termwise in the computational and in the
/// Hadamard decomposition.
pub fn ambiguity(state: &PureState) -> Result<Ambiguity> {
    if state.dims() != [2, 2] {
        return Err(Error::NotAQubit(state.dim()));
    }
    let computational = naive_collapse(state, &crate::qcore::computational_basis(2))?;
    let hadamard = naive_collapse(state, &hadamard_basis())?;
    let second = |s: &PureState| DensityMatrix::from_pure(s)?.partial_trace(&[1]);
    let distance = trace_distance(&second(&computational)?, &second(&hadamard)?)?;
    Ok(Ambiguity { computational, hadamard, distance })
}

/// The EPR pair read as `(|00> + |11>)/sqrt2` and as `(|++> + |-->)/sqrt2`.
pub fn schmidt_ambiguity_demo() -> Result<Ambiguity> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ambiguity(&PureState::from_real(&[h, 0.0, 0.0, h])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::haar_state;
    use crate::rng::trial_rng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn epr_readings_disagree() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = schmidt_ambiguity_demo().unwrap();
        let zero_plus = PureState::from_real(&[h, h, 0.0, 0.0]).unwrap();
        let zero_zero = PureState::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(out.computational.fidelity(&zero_plus), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.hadamard.fidelity(&zero_zero), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.distance, h, epsilon = 1e-12);
    }

    #[test]
    fn products_are_unambiguous() {
        let mut rng = trial_rng(50, 0);
        for _ in 0..20 {
            let s = haar_state(1, &mut rng).unwrap().tensor(&haar_state(1, &mut rng).unwrap()).unwrap();
            assert!(ambiguity(&s).unwrap().distance < 1e-10);
        }
    }

    #[test]
    fn rejects_wrong_shapes() {
        assert!(ambiguity(&PureState::from_real(&[1.0, 0.0, 0.0]).unwrap()).is_err());
    }
}
