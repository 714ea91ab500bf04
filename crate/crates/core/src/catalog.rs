//! Worked examples: Jordan nilpotents in `gl_n` and nilpotent Lie brackets.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cartan::{weyl_normalize, CartanContext};
use crate::error::{Error, Result};
use crate::hesselink::{optimal_class, HesselinkLabel, OptimalClass};
use crate::linalg::{orthonormal_span, projector, Matrix, Vector};
use crate::moment::{criticality_residual, moment, MomentValue};
use crate::rational::{int, rat, Rational, RationalVector};
use crate::reps::{index_pairs, Family, RepSpec, RepVector};

/// Criticality required before [`critical_bracket_check`] runs.
pub const CRITICAL_TOL: f64 = 1e-9;
pub const DERIVATION_TOL: f64 = 1e-10;
pub const ORTHOGONALITY_TOL: f64 = 1e-12;
pub const JACOBI_TOL: f64 = 1e-12;

/// Jordan block sizes, stored non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// Dominance order: same total and every partial sum at least as large.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for k in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All partitions of `n`, in reverse lexicographic order starting with `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                prefix.push(p);
                rec(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Indices `i` (0-based) with `E_{i,i+1}` in the block-nilpotent representative.
fn jordan_support(p: &Partition) -> Vec<usize> {
    let mut cuts = Vec::new();
    let mut acc = 0;
    for &part in p.parts() {
        acc += part;
        cuts.push(acc);
    }
    (1..p.n()).filter(|i| !cuts.contains(i)).map(|i| i - 1).collect()
}

/// `x_J = Σ_{i∈J} E_{i,i+1}` with one nilpotent Jordan block per part.
pub fn jordan_vector(p: &Partition) -> Result<RepVector> {
    if p.is_all_ones() {
        return Err(Error::InvalidPartition(format!(
            "({p}) gives the zero matrix"
        )));
    }
    let n = p.n();
    let mut x = Matrix::zeros(n, n);
    for i in jordan_support(p) {
        x[(i, i + 1)] = 1.0;
    }
    RepVector::from_matrix(&x)
}

/// `((k−1)/2, (k−3)/2, …, (1−k)/2)` for each block, concatenated and sorted.
pub fn jordan_display(p: &Partition) -> RationalVector {
    let mut coords = Vec::with_capacity(p.n());
    for &k in p.parts() {
        let k = k as i64;
        for i in 0..k {
            coords.push(rat(k - 1 - 2 * i, 2));
        }
    }
    RationalVector(weyl_normalize(&coords))
}

/// `Σ (n_j − 1)·n_j·(n_j + 1) / 12`.
pub fn jordan_q_formula(p: &Partition) -> Rational {
    p.parts()
        .iter()
        .map(|&k| {
            let k = k as i64;
            rat((k - 1) * k * (k + 1), 12)
        })
        .fold(int(0), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanReport {
    pub partition: Partition,
    pub label: HesselinkLabel,
    /// `η/q(η)`, Weyl-normalized.
    pub beta_paper: RationalVector,
    /// `⟨beta_paper, beta_paper⟩`.
    pub q_paper: Rational,
    pub q_formula: Rational,
    /// `beta_paper` equals the block display.
    pub display_ok: bool,
    /// `q_paper` equals the block formula and `q(η)·q_paper = 1`.
    pub identity_ok: bool,
    /// Largest eigenvalue of `ad(beta_paper)` on `gl_n`, i.e. `max βᵢ − min βⱼ`.
    pub max_ad_eigenvalue: Rational,
    /// Every eigenvalue of `ad(beta_paper) − q_paper·id` is `≤ 0`.
    pub negdef_ok: bool,
    /// `(n_j−1)/2 ≤ (n_j−1)n_j(n_j+1)/12 ≤ q_paper` for every block.
    pub displayed_bound_ok: bool,
}

pub fn jordan_label(p: &Partition) -> Result<JordanReport> {
    let x = jordan_vector(p)?;
    let label = match optimal_class(x.spec(), &x)? {
        OptimalClass::Unstable(l) => l,
        OptimalClass::Semistable => {
            return Err(Error::Unsupported(format!("x_J for ({p}) is not in the null cone")))
        }
    };
    let beta_paper = label.eta_normalized.clone();
    let q_paper = beta_paper.norm2();
    let q_formula = jordan_q_formula(p);
    let display_ok = beta_paper == jordan_display(p);
    let identity_ok = q_paper == q_formula && &label.q * &q_paper == int(1);

    let max_ad_eigenvalue = match (beta_paper.0.first(), beta_paper.0.last()) {
        (Some(hi), Some(lo)) => hi - lo,
        _ => int(0),
    };
    let negdef_ok = max_ad_eigenvalue <= q_paper;
    let displayed_bound_ok = p.parts().iter().all(|&k| {
        let k = k as i64;
        let block = rat((k - 1) * k * (k + 1), 12);
        rat(k - 1, 2) <= block && block <= q_paper
    });

    Ok(JordanReport {
        partition: p.clone(),
        label,
        beta_paper,
        q_paper,
        q_formula,
        display_ok,
        identity_ok,
        max_ad_eigenvalue,
        negdef_ok,
        displayed_bound_ok,
    })
}

/// A skew bracket on `ℝⁿ` by its structure constants `c^l_{ij}`, `i < j`.
///
/// Coordinates follow the `Brackets` representation: pairs `(i, j)` in
/// lexicographic order, and within a pair `l = 1, …, n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTensor {
    n: usize,
    coords: Vec<f64>,
    pairs: Vec<(usize, usize)>,
}

impl BracketTensor {
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        let pairs = index_pairs(n);
        if coords.len() != pairs.len() * n {
            return Err(Error::DimensionMismatch {
                expected: pairs.len() * n,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse("structure constants must be finite".into()));
        }
        Ok(BracketTensor { n, coords, pairs })
    }

    pub fn from_rep_vector(v: &RepVector) -> Result<Self> {
        if v.spec().family() != Family::Brackets {
            return Err(Error::Unsupported(format!("{} is not a bracket space", v.spec())));
        }
        BracketTensor::new(v.spec().n(), v.coords().iter().copied().collect())
    }

    pub fn to_rep_vector(&self) -> Result<RepVector> {
        RepVector::from_slice(RepSpec::new(Family::Brackets, self.n)?, &self.coords)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `c^l_{ij}` for any ordered pair (0-based), antisymmetric in `i, j`.
    pub fn constant(&self, l: usize, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        let p = self.pairs.iter().position(|&q| q == (a, b)).expect("valid pair");
        sign * self.coords[p * self.n + l]
    }

    /// `μ(x, y)`.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.n;
        let mut out = Vector::zeros(n);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let w = x[i] * y[j] - x[j] * y[i];
            if w == 0.0 {
                continue;
            }
            for l in 0..n {
                out[l] += w * self.coords[p * n + l];
            }
        }
        out
    }

    fn e(&self, i: usize) -> Vector {
        let mut v = Vector::zeros(self.n);
        v[i] = 1.0;
        v
    }

    /// Largest component of `μ(μ(x,y),z) + μ(μ(y,z),x) + μ(μ(z,x),y)` over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.e(i), self.e(j), self.e(k));
                    let s = self.bracket(&self.bracket(&x, &y), &z)
                        + self.bracket(&self.bracket(&y, &z), &x)
                        + self.bracket(&self.bracket(&z, &x), &y);
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    pub fn jacobi_ok(&self) -> bool {
        self.jacobi_residual() <= JACOBI_TOL
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketPreset {
    Heisenberg,
    Chain,
}

impl FromStr for BracketPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heisenberg" => Ok(BracketPreset::Heisenberg),
            "chain" => Ok(BracketPreset::Chain),
            other => Err(Error::Parse(format!("unknown bracket preset `{other}`"))),
        }
    }
}

/// `heisenberg` (`n = 3`, `μ(e₁,e₂) = e₃`) or `chain` (`μ(e₁,e_i) = e_{i+1}`, `n ≥ 3`).
pub fn bracket_preset(preset: BracketPreset, n: usize) -> Result<BracketTensor> {
    let pairs = index_pairs(n);
    let mut coords = vec![0.0; pairs.len() * n];
    let mut set = |i: usize, j: usize, l: usize| {
        let p = pairs.iter().position(|&q| q == (i, j)).expect("i < j");
        coords[p * n + l] = 1.0;
    };
    match preset {
        BracketPreset::Heisenberg => {
            if n != 3 {
                return Err(Error::Unsupported(format!("heisenberg needs n = 3, got {n}")));
            }
            set(0, 1, 2);
        }
        BracketPreset::Chain => {
            if n < 3 {
                return Err(Error::Unsupported(format!("chain needs n >= 3, got {n}")));
            }
            for i in 1..n - 1 {
                set(0, i, i + 1);
            }
        }
    }
    BracketTensor::new(n, coords)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivationReport {
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub d: Matrix,
    /// `max ‖Dμ(eᵢ,eⱼ) − μ(Deᵢ,eⱼ) − μ(eᵢ,Deⱼ)‖`.
    pub derivation_residual: f64,
    /// `(re, im)`, sorted by real part descending.
    pub eigenvalues: Vec<(f64, f64)>,
    pub all_positive: bool,
    /// `dim V_i` for `V_1 = ℝⁿ ⊃ V_2 = μ(ℝⁿ,ℝⁿ) ⊃ …`, the lower central series.
    pub filtration_dims: Vec<usize>,
    pub nilpotent: bool,
    /// `‖(1 − P_i)·D·P_i‖` for the projector `P_i` onto `V_i`.
    pub invariance_residuals: Vec<f64>,
    /// `‖(1 − Q_i)·Dᵀ·Q_i‖` for `W_i = V_i ⊖ V_{i+1}`; reported, not asserted.
    pub transpose_residuals: Vec<f64>,
}

fn pi_of(mu: &BracketTensor, d: &Matrix, i: usize, j: usize) -> Vector {
    let (ei, ej) = (mu.e(i), mu.e(j));
    d * mu.bracket(&ei, &ej) - mu.bracket(&(d * &ei), &ej) - mu.bracket(&ei, &(d * &ej))
}

/// Lower central series as orthonormal column bases, ending at `0` or where it stalls.
fn lower_central_series(mu: &BracketTensor) -> (Vec<Matrix>, bool) {
    let n = mu.n();
    let mut series = vec![Matrix::identity(n, n)];
    loop {
        let current = series.last().expect("non-empty");
        let mut images = Vec::new();
        for i in 0..n {
            for c in current.column_iter() {
                images.push(mu.bracket(&mu.e(i), &c.into_owned()));
            }
        }
        let next = orthonormal_span(&images, n, 1e-10);
        if next.ncols() == 0 {
            return (series, true);
        }
        if next.ncols() == current.ncols() {
            return (series, false);
        }
        series.push(next);
    }
}

pub fn derivation_report(mu: &BracketTensor, d: &Matrix) -> Result<DerivationReport> {
    let n = mu.n();
    if d.nrows() != n || d.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.nrows(),
        });
    }
    let mut derivation_residual: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            derivation_residual = derivation_residual.max(pi_of(mu, d, i, j).norm());
        }
    }

    let mut eigenvalues: Vec<(f64, f64)> = d
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect();
    eigenvalues.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let scale = d.amax().max(1.0);
    let all_positive = n > 0
        && eigenvalues
            .iter()
            .all(|&(re, im)| re > 1e-12 * scale && im.abs() <= 1e-9 * scale);

    let (series, nilpotent) = lower_central_series(mu);
    let filtration_dims = series.iter().map(Matrix::ncols).collect();
    let identity = Matrix::identity(n, n);
    let invariance_residuals = series
        .iter()
        .map(|b| {
            let p = projector(b);
            ((&identity - &p) * d * &p).norm()
        })
        .collect();
    let transpose_residuals = series
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let p = projector(b);
            let below = series.get(k + 1).map_or(Matrix::zeros(n, n), projector);
            let q = p - below;
            ((&identity - &q) * d.transpose() * &q).norm()
        })
        .collect();

    Ok(DerivationReport {
        d: d.clone(),
        derivation_residual,
        eigenvalues,
        all_positive,
        filtration_dims,
        nilpotent,
        invariance_residuals,
        transpose_residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalBracketReport {
    pub beta: MomentValue,
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub beta_plus: Matrix,
    pub criticality_residual: f64,
    pub trace: f64,
    pub derivation: DerivationReport,
    pub is_derivation: bool,
    pub positive: bool,
    /// `⟨β⁺, β⟩` when `tr β = −1`.
    pub orthogonality: Option<f64>,
    pub orthogonal_ok: Option<bool>,
}

/// `β = m(μ)`, `β⁺ = β + ‖β‖²·I`, and whether `β⁺` is a positive derivation of `μ`.
///
/// `μ` must already be a critical direction; run the gradient flow first otherwise.
pub fn critical_bracket_check(ctx: &CartanContext, mu: &BracketTensor) -> Result<CriticalBracketReport> {
    if mu.is_zero() {
        return Err(Error::ZeroVector);
    }
    let v = mu.to_rep_vector()?;
    let v = v.scaled(1.0 / v.norm());
    let spec = v.spec().clone();
    let residual = criticality_residual(ctx, &spec, &v)?;
    if !(residual <= CRITICAL_TOL) {
        return Err(Error::NotCritical(residual));
    }
    let beta = moment(ctx, &spec, &v)?;
    let n = mu.n();
    let beta_plus = &beta.matrix + Matrix::identity(n, n) * beta.energy;
    let unit = BracketTensor::from_rep_vector(&v)?;
    let derivation = derivation_report(&unit, &beta_plus)?;
    let trace = beta.matrix.trace();
    let (orthogonality, orthogonal_ok) = if (trace + 1.0).abs() <= 1e-9 {
        let o = beta_plus.dot(&beta.matrix);
        (Some(o), Some(o.abs() <= ORTHOGONALITY_TOL))
    } else {
        (None, None)
    };
    Ok(CriticalBracketReport {
        is_derivation: derivation.derivation_residual <= DERIVATION_TOL,
        positive: derivation.all_positive,
        beta,
        beta_plus,
        criticality_residual: residual,
        trace,
        derivation,
        orthogonality,
        orthogonal_ok,
    })
}
