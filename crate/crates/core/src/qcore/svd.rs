use super::{complete_basis, CMatrix, CVector, C64};

/// Singular value decomposition `M = sum_i s_i u_i v_i^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdData {
    /// Nonnegative, descending.
    pub singular_values: Vec<f64>,
    /// Columns are the left singular vectors `u_i`.
    pub left_vectors: CMatrix,
    /// Columns are the right singular vectors `v_i`.
    pub right_vectors: CMatrix,
    /// `s_max / s_min`; infinite when the matrix is singular.
    pub condition_number: f64,
}

impl SvdData {
    pub fn largest(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.singular_values.last().expect("nonempty")
    }

    pub fn left(&self, i: usize) -> CVector {
        self.left_vectors.column(i).into_owned()
    }

    pub fn right(&self, i: usize) -> CVector {
        self.right_vectors.column(i).into_owned()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.singular_values.len();
        let mut m = CMatrix::zeros(self.left_vectors.nrows(), self.right_vectors.nrows());
        for i in 0..n {
            m += self.left(i) * self.right(i).adjoint() * C64::new(self.singular_values[i], 0.0);
        }
        m
    }
}

const SWEEPS: usize = 60;

/// One-sided Jacobi SVD of a square complex matrix.
///
/// Columns of a working copy are rotated pairwise until mutually orthogonal; the
/// accumulated rotations form the right singular vectors.
pub fn svd(m: &CMatrix) -> SvdData {
    let n = m.ncols();
    assert_eq!(m.nrows(), n, "svd expects a square matrix");
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let eps = f64::EPSILON;
    for _ in 0..SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rephase column q so that <a_p|a_q> is real and positive.
                let phase = gamma / C64::new(g, 0.0);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase.conj();
                        mat[(i, p)] = xp * cs - xq * sn;
                        mat[(i, q)] = xp * sn + xq * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (a.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let scale = order.first().map(|o| o.0).unwrap_or(0.0);
    let mut left_cols: Vec<CVector> = Vec::with_capacity(n);
    let mut right_cols: Vec<CVector> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for &(s, j) in &order {
        right_cols.push(v.column(j).into_owned());
        values.push(s);
        if s > scale * 1e-14 && s > 0.0 {
            left_cols.push(a.column(j) / C64::new(s, 0.0));
        }
    }
    let left = complete_basis(&left_cols, n);
    let smallest = *values.last().unwrap_or(&0.0);
    let condition_number =
        if smallest > scale * 1e-14 && smallest > 0.0 { values[0] / smallest } else { f64::INFINITY };
    // Singular values below the rank threshold are reported as exact zeros.
    for s in values.iter_mut() {
        if *s <= scale * 1e-14 {
            *s = 0.0;
        }
    }
    SvdData {
        singular_values: values,
        left_vectors: left,
        right_vectors: CMatrix::from_columns(&right_cols),
        condition_number,
    }
}
