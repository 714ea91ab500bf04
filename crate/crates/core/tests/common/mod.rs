//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use strata::rational::{Rational, RationalVector};

/// Plain Gauss-Jordan elimination over `ℚ`; `None` when singular.
pub fn gauss_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let sub = &f * &a[col][j];
                    a[r][j] -= sub;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some(b)
}

/// Minimum-norm point of `conv(points)` by exhaustive search: for every subset,
/// minimize the norm over its affine hull exactly and keep the feasible ones.
pub fn min_norm_by_enumeration(points: &[RationalVector]) -> RationalVector {
    let k = points.len();
    let dim = points[0].len();
    let mut best: Option<(Rational, RationalVector)> = None;
    for mask in 1u32..(1 << k) {
        let subset: Vec<&RationalVector> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &points[i]).collect();
        let m = subset.len();
        let mut a = vec![vec![Rational::zero(); m + 1]; m + 1];
        for i in 0..m {
            for j in 0..m {
                a[i][j] = subset[i].dot(subset[j]);
            }
            a[i][m] = Rational::one();
            a[m][i] = Rational::one();
        }
        let mut b = vec![Rational::zero(); m + 1];
        b[m] = Rational::one();
        let Some(sol) = gauss_solve(a, b) else { continue };
        if sol[..m].iter().any(|c| c.is_negative()) {
            continue;
        }
        let mut x = RationalVector::zeros(dim);
        for (p, c) in subset.iter().zip(&sol) {
            x = &x + &p.scale(c);
        }
        let q = x.norm2();
        if best.as_ref().map_or(true, |(bq, _)| q < *bq) {
            best = Some((q, x));
        }
    }
    best.expect("singletons are always feasible").1
}
