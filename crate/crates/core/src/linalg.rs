//! Small dense helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Numerical rank of `m` under the relative cutoff.
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_CUTOFF * max).count()
}

/// Orthonormal (Euclidean) basis of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    column_space_scaled(m, 0.0)
}

/// Column space with the cutoff taken relative to `max(sigma_max, scale)`,
/// so that round-off columns of an otherwise vanishing matrix are dropped.
pub fn column_space_scaled(m: &DMatrix<f64>, scale: f64) -> Vec<DVector<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max).max(scale);
    if max == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_CUTOFF * max)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Orthonormal (Euclidean) basis of the null space of `m`.
pub fn null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Thin SVD only yields min(rows, cols) right vectors; pad so all n appear.
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return (0..n)
            .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= RANK_CUTOFF * max)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect()
}

/// Stack column vectors into a matrix; an empty list gives `dim x 0`.
pub fn hstack(dim: usize, vs: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, vs.len());
    for (j, v) in vs.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

pub fn basis_vector(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}
