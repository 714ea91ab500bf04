//! Exact rational vectors and a fraction-free linear solver.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Always `"p/q"`, denominator included, e.g. `"2/1"`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"p/q"`, `"p"`, or a terminating decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let whole_int: BigInt = if whole_abs.is_empty() {
            BigInt::zero()
        } else {
            whole_abs.parse().map_err(|_| bad())?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_int: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(whole_int * &denom + frac_int, denom);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// An exact point of `M(A) ⊗ ℚ ≅ ℚⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&c| int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `⟨η, η⟩`.
    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, a| acc + a)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    pub fn parse_strings(items: &[String]) -> Result<Self> {
        items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: Self) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn lcm_of_denominators(row: &[Rational]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
}

/// Solves the square system `A x = b` exactly.
///
/// Rows are first cleared of denominators, then reduced with Bareiss'
/// fraction-free elimination so every intermediate entry stays an integer
/// minor. Returns `None` for a singular matrix.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        debug_assert_eq!(row.len(), n);
        let mut full: Vec<Rational> = row.clone();
        full.push(rhs.clone());
        let l = BigRational::from_integer(lcm_of_denominators(&full));
        m.push(full.iter().map(|x| (x * &l).to_integer()).collect());
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot_row);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[k][n].clone());
        for j in (k + 1)..n {
            acc -= BigRational::from_integer(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / BigRational::from_integer(m[k][k].clone());
    }
    Some(x)
}

/// Barycentric coefficients of the point of minimal norm on the affine hull of
/// `points`, from `[G 1; 1ᵀ 0] [α; μ] = [0; 1]` with `G` the Gram matrix.
///
/// `None` when the points are affinely dependent.
pub fn affine_minimizer(points: &[&RationalVector]) -> Option<Vec<Rational>> {
    let k = points.len();
    let mut a = vec![vec![Rational::zero(); k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = points[i].dot(points[j]);
        }
        a[i][k] = Rational::one();
        a[k][i] = Rational::one();
    }
    let mut b = vec![Rational::zero(); k + 1];
    b[k] = Rational::one();
    let mut sol = solve_exact(&a, &b)?;
    sol.truncate(k);
    Some(sol)
}

/// `Σ coefficients[i]·points[i]`.
pub fn combine(points: &[&RationalVector], coefficients: &[Rational]) -> RationalVector {
    let n = points.first().map_or(0, |p| p.len());
    let mut out = RationalVector::zeros(n);
    for (p, c) in points.iter().zip(coefficients) {
        for (o, x) in out.0.iter_mut().zip(&p.0) {
            *o += x * c;
        }
    }
    out
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_and_parsing() {
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(parse_rational("2/5").unwrap(), rat(2, 5));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![int(1), int(2)];
        assert_eq!(solve_exact(&a, &b).unwrap(), vec![rat(1, 5), rat(3, 5)]);
    }

    #[test]
    fn needs_pivoting() {
        let a = vec![vec![int(0), int(1)], vec![rat(1, 2), int(0)]];
        let b = vec![int(3), int(1)];
        assert_eq!(solve_exact(&a, &b).unwrap(), vec![int(2), int(3)]);
    }

    #[test]
    fn singular_returns_none() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve_exact(&a, &[int(1), int(1)]).is_none());
    }

    #[test]
    fn affine_minimizer_on_segment() {
        let p = RationalVector::from_ints(&[1, -1, 0]);
        let q = RationalVector::from_ints(&[0, 1, -1]);
        let c = affine_minimizer(&[&p, &q]).unwrap();
        assert_eq!(c, vec![rat(1, 2), rat(1, 2)]);
        let x = combine(&[&p, &q], &c);
        assert_eq!(x, RationalVector(vec![rat(1, 2), int(0), rat(-1, 2)]));
        assert!(affine_minimizer(&[&p, &p]).is_none());
    }
}
