//! Small dense helpers shared by the numeric modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Largest absolute entry of `S - Sᵀ`.
pub fn asymmetry(s: &Matrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..s.nrows() {
        for j in (i + 1)..s.ncols() {
            worst = worst.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    worst
}

/// Fails unless `s` is square and symmetric to within `1e-12` relative to its largest entry.
pub fn ensure_symmetric(s: &Matrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let scale = s.amax().max(1.0);
    let asym = asymmetry(s);
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

pub fn symmetrize(s: &Matrix) -> Matrix {
    (s + s.transpose()) * 0.5
}

/// Symmetric eigendecomposition with eigenvalues in ascending order.
///
/// Columns of the returned matrix are the matching unit eigenvectors.
pub fn sorted_symmetric_eigen(s: &Matrix) -> (Vector, Matrix) {
    let n = s.nrows();
    let eig = symmetrize(s).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a symmetric matrix, non-increasing.
pub fn symmetric_spectrum_desc(s: &Matrix) -> Vec<f64> {
    let (values, _) = sorted_symmetric_eigen(s);
    values.iter().rev().copied().collect()
}

/// 2-norm condition number from the singular values; infinite when singular.
pub fn condition_number(g: &Matrix) -> f64 {
    let sv = g.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a square matrix; `Error::Singular` when it does not exist numerically.
pub fn checked_inverse(g: &Matrix) -> Result<Matrix> {
    if !g.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    if !(condition_number(g) < 1e15) {
        return Err(Error::Singular);
    }
    g.clone().try_inverse().ok_or(Error::Singular)
}

pub fn is_diagonal(x: &Matrix) -> bool {
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            if i != j && x[(i, j)] != 0.0 {
                return false;
            }
        }
    }
    true
}

/// Orthonormal basis (as columns) of the span of the given vectors, rank cut at `tol`
/// relative to the largest singular value.
pub fn orthonormal_span(vectors: &[Vector], dim: usize, tol: f64) -> Matrix {
    if vectors.is_empty() {
        return Matrix::zeros(dim, 0);
    }
    let a = Matrix::from_columns(vectors);
    let svd = a.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Matrix::zeros(dim, 0);
    }
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(dim, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Orthogonal projector onto the column span of an orthonormal `basis`.
pub fn projector(basis: &Matrix) -> Matrix {
    basis * basis.transpose()
}
