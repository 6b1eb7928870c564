use rand::Rng;

use super::{check_subsystems, gates, local_layout, CVector, PureState, C64};
use crate::{Error, Result};

/// Probability-weighted list of pure states.
///
/// Kept separate from density matrices because the two stop being equivalent
/// once a nonlinear map is applied branch by branch.
#[derive(Debug, Clone, PartialEq)]
pub struct PureEnsemble {
    members: Vec<(f64, PureState)>,
}

impl PureEnsemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if members.iter().any(|(p, _)| !(0.0..=1.0).contains(p)) || (total - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self { members })
    }

    pub fn pure(state: PureState) -> Self {
        Self { members: vec![(1.0, state)] }
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    /// Applies `f` to every member state, keeping the weights.
    pub fn map_states<F>(&self, mut f: F) -> Result<PureEnsemble>
    where
        F: FnMut(&PureState) -> Result<PureState>,
    {
        let members = self.members.iter().map(|(p, s)| Ok((*p, f(s)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self { members })
    }
}

/// One outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub outcome: usize,
    pub probability: f64,
    pub state: PureState,
}

fn check_basis(basis: &[CVector], dim: usize) -> Result<()> {
    if basis.len() != dim {
        return Err(Error::BadBasis(format!("{} vectors for a {dim}-dimensional subsystem", basis.len())));
    }
    for (i, u) in basis.iter().enumerate() {
        if u.len() != dim {
            return Err(Error::BadBasis(format!("vector {i} has length {}", u.len())));
        }
        for (j, v) in basis.iter().enumerate().skip(i) {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (u.dotc(v) - C64::new(expect, 0.0)).norm() > 1e-9 {
                return Err(Error::BadBasis(format!("<{i}|{j}> deviates from {expect}")));
            }
        }
    }
    Ok(())
}

/// All outcomes of measuring `targets` in `basis`, including zero-probability ones
/// (whose `state` is the unmeasured input).
pub fn measurement_branches(state: &PureState, targets: &[usize], basis: &[CVector]) -> Result<Vec<Branch>> {
    check_subsystems(state.dims(), targets)?;
    let (offsets, _) = local_layout(state.dims(), targets);
    check_basis(basis, offsets.len())?;
    basis
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let v = state.apply_local_raw(targets, &gates::projector(b))?;
            let p = v.norm_squared();
            let post = if p > 0.0 {
                PureState::normalized(state.dims().to_vec(), v).unwrap_or_else(|_| state.clone())
            } else {
                state.clone()
            };
            Ok(Branch { outcome: k, probability: p, state: post })
        })
        .collect()
}

impl PureEnsemble {
    /// Ensemble of post-measurement states with nonzero probability.
    pub fn from_measurement(state: &PureState, targets: &[usize], basis: &[CVector]) -> Result<Self> {
        let members = measurement_branches(state, targets, basis)?
            .into_iter()
            .filter(|b| b.probability > super::ZERO_THRESHOLD * super::ZERO_THRESHOLD)
            .map(|b| (b.probability, b.state))
            .collect::<Vec<_>>();
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        let members = members.into_iter().map(|(p, s)| (p / total, s)).collect();
        Self::new(members)
    }
}

/// Samples a Born-rule outcome by inverse CDF over outcome indices in ascending order.
pub fn measure<R: Rng + ?Sized>(
    state: &PureState,
    targets: &[usize],
    basis: &[CVector],
    rng: &mut R,
) -> Result<(usize, PureState)> {
    let branches = measurement_branches(state, targets, basis)?;
    let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
    let k = sample_index(&probs, rng);
    let b = branches.into_iter().nth(k).expect("index within branches");
    Ok((b.outcome, b.state))
}

/// Inverse-CDF sampling of an index from (possibly unnormalized) weights.
pub fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Computational basis of dimension `d`.
pub fn computational_basis(d: usize) -> Vec<CVector> {
    (0..d)
        .map(|i| {
            let mut v = CVector::zeros(d);
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect()
}
