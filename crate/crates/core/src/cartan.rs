//! Cartan data for `GL_n(ℝ)` and `SL_n(ℝ)`.
//!
//! The maximal compact subgroup is `O_n`, so the Lie algebra splits into
//! skew-symmetric `k` and symmetric `p`, orthogonal for the trace form
//! `⟨X, Y⟩ = tr(XᵀY)`. The diagonal matrices in `p` span the split torus
//! algebra `a` and always come first in [`CartanContext::p_basis`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_symmetric, sorted_symmetric_eigen, symmetrize, Matrix};

/// Eigenvalue-equality tolerance used when grading by `ad(β)`.
pub const AD_GRADING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    SL,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::GL => write!(f, "GL"),
            GroupKind::SL => write!(f, "SL"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(GroupKind::GL),
            "sl" => Ok(GroupKind::SL),
            other => Err(Error::Parse(format!("unknown group `{other}` (expected gl or sl)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CartanContext {
    n: usize,
    group: GroupKind,
    p_basis: Vec<Matrix>,
    k_basis: Vec<Matrix>,
    torus_dim: usize,
}

impl CartanContext {
    pub fn new(n: usize, group: GroupKind) -> Result<Self> {
        build_context(n, group)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    /// Orthonormal basis of `p`, diagonal (torus) elements first.
    pub fn p_basis(&self) -> &[Matrix] {
        &self.p_basis
    }

    /// Orthonormal basis of `k = so_n`.
    pub fn k_basis(&self) -> &[Matrix] {
        &self.k_basis
    }

    /// The prefix of `p_basis` spanning `a`.
    pub fn torus_basis(&self) -> &[Matrix] {
        &self.p_basis[..self.torus_dim]
    }

    pub fn lie_algebra_dim(&self) -> usize {
        match self.group {
            GroupKind::GL => self.n * self.n,
            GroupKind::SL => self.n * self.n - 1,
        }
    }

    /// The trace form `tr(XᵀY)`.
    pub fn inner_g(&self, x: &Matrix, y: &Matrix) -> f64 {
        x.dot(y)
    }

    /// Differential of the Cartan involution, `X ↦ -Xᵀ`.
    pub fn involution(&self, x: &Matrix) -> Matrix {
        -x.transpose()
    }

    /// Orthogonal projection of an arbitrary matrix onto `p`.
    pub fn project_p(&self, x: &Matrix) -> Matrix {
        let mut s = symmetrize(x);
        if self.group == GroupKind::SL {
            let shift = s.trace() / self.n as f64;
            for i in 0..self.n {
                s[(i, i)] -= shift;
            }
        }
        s
    }

    /// Coordinates of `x` in `p_basis` (orthonormal, so plain inner products).
    pub fn p_coordinates(&self, x: &Matrix) -> Vec<f64> {
        self.p_basis.iter().map(|b| self.inner_g(b, x)).collect()
    }
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Builds the Cartan data for `GL_n` or `SL_n`.
pub fn build_context(n: usize, group: GroupKind) -> Result<CartanContext> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    if group == GroupKind::SL && n < 2 {
        return Err(Error::InvalidDimension("SL_n needs n >= 2".into()));
    }
    let mut p_basis = Vec::with_capacity(n * (n + 1) / 2);
    match group {
        GroupKind::GL => {
            for i in 0..n {
                p_basis.push(unit(n, i, i));
            }
        }
        GroupKind::SL => {
            // Gram-Schmidt on E_ii - E_{i+1,i+1}.
            let mut done: Vec<Matrix> = Vec::with_capacity(n - 1);
            for i in 0..n - 1 {
                let mut d = unit(n, i, i) - unit(n, i + 1, i + 1);
                for b in &done {
                    let c = b.dot(&d);
                    d -= b * c;
                }
                let norm = d.norm();
                done.push(d / norm);
            }
            p_basis.extend(done);
        }
    }
    let torus_dim = p_basis.len();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut k_basis = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            p_basis.push((unit(n, i, j) + unit(n, j, i)) * r);
            k_basis.push((unit(n, i, j) - unit(n, j, i)) * r);
        }
    }
    Ok(CartanContext {
        n,
        group,
        p_basis,
        k_basis,
        torus_dim,
    })
}

/// The unique symmetric positive-definite square root of `s`.
pub fn spd_sqrt(s: &Matrix) -> Result<Matrix> {
    ensure_symmetric(s)?;
    let (values, vectors) = sorted_symmetric_eigen(s);
    let smallest = values[0];
    if !(smallest > 0.0) {
        return Err(Error::NotPositiveDefinite(smallest));
    }
    let n = s.nrows();
    let mut scaled = vectors.clone();
    for k in 0..n {
        let r = values[k].sqrt();
        scaled.column_mut(k).scale_mut(r);
    }
    Ok(symmetrize(&(scaled * vectors.transpose())))
}

/// A basis of `q_β`, the sum of the non-negative eigenspaces of `ad(β)`.
///
/// Basis elements are `u_i u_jᵀ` for eigenvectors `u_i`, `u_j` of `β` with
/// `λ_i - λ_j ≥ -AD_GRADING_TOL`; for `SL` the diagonal block is replaced by its
/// trace-zero part.
pub fn parabolic_lie_algebra(ctx: &CartanContext, beta: &Matrix) -> Result<Vec<Matrix>> {
    let n = ctx.n();
    if beta.nrows() != n || beta.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: beta.nrows(),
        });
    }
    ensure_symmetric(beta)?;
    let (values, vectors) = sorted_symmetric_eigen(beta);
    let outer = |i: usize, j: usize| vectors.column(i) * vectors.column(j).transpose();
    let mut basis = Vec::new();
    match ctx.group() {
        GroupKind::GL => {
            for i in 0..n {
                basis.push(outer(i, i));
            }
        }
        GroupKind::SL => {
            for i in 0..n - 1 {
                basis.push(outer(i, i) - outer(i + 1, i + 1));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && values[i] - values[j] >= -AD_GRADING_TOL {
                basis.push(outer(i, j));
            }
        }
    }
    Ok(basis)
}

/// Canonical representative of the `S_n`-orbit: coordinates sorted non-increasing.
pub fn weyl_normalize<T: PartialOrd + Clone>(v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gram(basis: &[Matrix]) -> Matrix {
        Matrix::from_fn(basis.len(), basis.len(), |i, j| basis[i].dot(&basis[j]))
    }

    #[test]
    fn dimension_counts() {
        let ctx = build_context(2, GroupKind::GL).unwrap();
        assert_eq!(ctx.p_basis().len(), 3);
        assert_eq!(ctx.k_basis().len(), 1);
        let ctx = build_context(3, GroupKind::SL).unwrap();
        assert_eq!(ctx.p_basis().len(), 5);
        assert_eq!(ctx.torus_basis().len(), 2);
    }

    #[test]
    fn trace_form_on_unit_matrix() {
        let ctx = build_context(3, GroupKind::GL).unwrap();
        let e11 = unit(3, 0, 0);
        assert_eq!(ctx.inner_g(&e11, &e11), 1.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(build_context(0, GroupKind::GL).is_err());
        assert!(build_context(1, GroupKind::SL).is_err());
        assert!(build_context(1, GroupKind::GL).is_ok());
    }

    #[test]
    fn bases_are_orthonormal_and_split() {
        for n in 1..=6 {
            for group in [GroupKind::GL, GroupKind::SL] {
                let Ok(ctx) = build_context(n, group) else {
                    continue;
                };
                let gp = gram(ctx.p_basis());
                let gk = gram(ctx.k_basis());
                assert!((gp - Matrix::identity(ctx.p_basis().len(), ctx.p_basis().len())).amax() < 1e-14);
                assert!((gk - Matrix::identity(ctx.k_basis().len(), ctx.k_basis().len())).amax() < 1e-14);
                for b in ctx.p_basis() {
                    assert_eq!(b, &b.transpose());
                    assert_eq!(&ctx.involution(b), &(-b));
                    if group == GroupKind::SL {
                        assert!(b.trace().abs() < 1e-15);
                    }
                    for x in ctx.k_basis() {
                        assert!(ctx.inner_g(x, b).abs() < 1e-14);
                    }
                }
                for x in ctx.k_basis() {
                    assert_eq!(x, &(-x.transpose()));
                    assert_eq!(&ctx.involution(x), x);
                }
                for b in ctx.torus_basis() {
                    assert!(crate::linalg::is_diagonal(b));
                }
            }
        }
    }

    #[test]
    fn spd_sqrt_small_cases() {
        let i3 = Matrix::identity(3, 3);
        assert!((spd_sqrt(&i3).unwrap() - &i3).amax() < 1e-15);
        let s = Matrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let h = spd_sqrt(&s).unwrap();
        assert!((h - Matrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]))).amax() < 1e-15);
    }

    #[test]
    fn spd_sqrt_errors() {
        let non_sym = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(spd_sqrt(&non_sym), Err(Error::NotSymmetric(_))));
        let indefinite = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(spd_sqrt(&indefinite), Err(Error::NotPositiveDefinite(_))));
        let singular = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(spd_sqrt(&singular).is_err());
    }

    #[test]
    fn spd_sqrt_random_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let n = 1 + trial % 8;
            let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let s = &a * a.transpose() + Matrix::identity(n, n) * 0.1;
            let h = spd_sqrt(&s).unwrap();
            // oracle: plain multiplication of the output
            let err = (&h * &h - &s).norm() / s.norm();
            assert!(err <= 1e-12, "n={n} err={err}");
            assert!(crate::linalg::asymmetry(&h) == 0.0);
        }
    }

    fn span_contains(basis: &[Matrix], x: &Matrix) -> f64 {
        let n2 = x.len();
        let cols: Vec<DVector<f64>> = basis
            .iter()
            .map(|b| DVector::from_column_slice(b.as_slice()))
            .collect();
        let a = Matrix::from_columns(&cols);
        let target = DVector::from_column_slice(x.as_slice());
        let svd = a.clone().svd(true, true);
        let coef = svd.solve(&target, 1e-12).unwrap();
        assert_eq!(target.len(), n2);
        (a * coef - target).norm()
    }

    #[test]
    fn parabolic_examples() {
        let ctx = build_context(2, GroupKind::GL).unwrap();
        assert_eq!(parabolic_lie_algebra(&ctx, &Matrix::zeros(2, 2)).unwrap().len(), 4);

        let beta = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let q = parabolic_lie_algebra(&ctx, &beta).unwrap();
        assert_eq!(q.len(), 3);
        // ad(β)E12 = 2E12, ad(β)E21 = -2E21: upper triangular only
        assert!(span_contains(&q, &unit(2, 0, 1)) < 1e-12);
        assert!(span_contains(&q, &unit(2, 1, 0)) > 0.5);

        let ctx3 = build_context(3, GroupKind::GL).unwrap();
        let beta = Matrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, -1.0]));
        let q = parabolic_lie_algebra(&ctx3, &beta).unwrap();
        assert_eq!(q.len(), 6);
        for i in 0..3 {
            for j in i..3 {
                assert!(span_contains(&q, &unit(3, i, j)) < 1e-12);
            }
        }
    }

    #[test]
    fn parabolic_closed_under_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for group in [GroupKind::GL, GroupKind::SL] {
            for n in 2..=4 {
                let ctx = build_context(n, group).unwrap();
                for _ in 0..5 {
                    // small integer spectra so that eigenvalue coincidences occur
                    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2..=2) as f64).collect();
                    let mut beta = Matrix::from_diagonal(&DVector::from_vec(diag));
                    if group == GroupKind::SL {
                        beta = ctx.project_p(&beta);
                    }
                    let q = parabolic_lie_algebra(&ctx, &beta).unwrap();
                    for a in &q {
                        for b in &q {
                            let c = a * b - b * a;
                            assert!(span_contains(&q, &c) < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parabolic_rejects_non_symmetric() {
        let ctx = build_context(2, GroupKind::GL).unwrap();
        let beta = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(parabolic_lie_algebra(&ctx, &beta).is_err());
    }

    #[test]
    fn weyl_normalize_examples() {
        assert_eq!(weyl_normalize(&[-1.0, 1.0, 0.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(weyl_normalize(&[0.5, 0.5]), vec![0.5, 0.5]);
    }

    proptest::proptest! {
        #[test]
        fn weyl_normalize_is_idempotent(v in proptest::collection::vec(-100i64..100, 0..8)) {
            let once = weyl_normalize(&v);
            proptest::prop_assert_eq!(weyl_normalize(&once), once.clone());
            proptest::prop_assert!(once.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
