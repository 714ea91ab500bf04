//! Representation catalog.
//!
//! Each family fixes a coordinate basis of `V` in which the `K`-invariant
//! scalar product is the plain dot product (up to one uniform factor for the
//! bracket space), and every coordinate spans a weight space of the diagonal
//! torus.
//!
//! | family       | coordinates                                   | weight          |
//! |--------------|-----------------------------------------------|-----------------|
//! | Standard     | `e_i`                                         | `e_i`           |
//! | Dual         | `ě_i`                                         | `-e_i`          |
//! | Adjoint      | `E_ij`, row-major                             | `e_i - e_j`     |
//! | Lambda2      | `Φ(e_i∧e_j) = E_ij - E_ji`, `i<j` lexicographic | `e_i + e_j`   |
//! | Brackets     | `c^l_ij` with `μ(e_i,e_j) = Σ_l c^l_ij e_l`, pair-major then `l` | `e_l - e_i - e_j` |
//! | TorusWeights | user supplied                                 | user supplied   |
//!
//! The bracket scalar product sums over ordered pairs, `⟨μ,μ'⟩ = Σ_{i,j} ⟨μ(e_i,e_j), μ'(e_i,e_j)⟩`,
//! which is twice the coordinate dot product.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, is_diagonal, Matrix, Vector};

/// Default relative threshold below which a weight component counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Standard,
    Dual,
    Adjoint,
    Lambda2,
    Brackets,
    TorusWeights,
}

impl Family {
    pub const BUILT_IN: [Family; 5] = [
        Family::Standard,
        Family::Dual,
        Family::Adjoint,
        Family::Lambda2,
        Family::Brackets,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Standard => "Standard",
            Family::Dual => "Dual",
            Family::Adjoint => "Adjoint",
            Family::Lambda2 => "Lambda2",
            Family::Brackets => "Brackets",
            Family::TorusWeights => "TorusWeights",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "standard" => Ok(Family::Standard),
            "dual" => Ok(Family::Dual),
            "adjoint" => Ok(Family::Adjoint),
            "lambda2" => Ok(Family::Lambda2),
            "brackets" => Ok(Family::Brackets),
            "torusweights" | "torus" => Ok(Family::TorusWeights),
            _ => Err(Error::Parse(format!("unknown representation family `{s}`"))),
        }
    }
}

/// A character of the diagonal torus, `diag(t) ↦ ∏ t_i^{χ_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `dχ(X)` for a diagonal `X`.
    pub fn pair_diag(&self, x: &Matrix) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * x[(i, i)])
            .sum()
    }
}

impl fmt::Display for WeightVector {
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

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepSpec {
    family: Family,
    n: usize,
    weights: Vec<WeightVector>,
}

/// Lexicographic list of pairs `i < j`.
pub fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

fn unit_weight(n: usize, terms: &[(usize, i64)]) -> WeightVector {
    let mut w = vec![0i64; n];
    for &(i, c) in terms {
        w[i] += c;
    }
    WeightVector(w)
}

impl RepSpec {
    /// One of the five `GL_n` families.
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if family == Family::TorusWeights {
            return Err(Error::Unsupported(
                "torus representations are built with RepSpec::torus".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidDimension("n must be at least 1".into()));
        }
        Ok(RepSpec {
            family,
            n,
            weights: Vec::new(),
        })
    }

    /// A torus representation with one coordinate per listed weight.
    pub fn torus(weights: Vec<WeightVector>) -> Result<Self> {
        let first = weights.first().ok_or(Error::EmptyWeights)?;
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidDimension("weights must have at least one entry".into()));
        }
        if let Some(bad) = weights.iter().find(|w| w.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(RepSpec {
            family: Family::TorusWeights,
            n,
            weights,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::Standard | Family::Dual => n,
            Family::Adjoint => n * n,
            Family::Lambda2 => n * (n - 1) / 2,
            Family::Brackets => n * n * (n - 1) / 2,
            Family::TorusWeights => self.weights.len(),
        }
    }

    /// Scalar product on `V` in this family's coordinates.
    pub fn inner(&self, a: &Vector, b: &Vector) -> f64 {
        let d = a.dot(b);
        if self.family == Family::Brackets {
            2.0 * d
        } else {
            d
        }
    }

    pub fn norm(&self, a: &Vector) -> f64 {
        self.inner(a, a).sqrt()
    }

    /// Torus weight of every coordinate, in coordinate order.
    pub fn weights(&self) -> Vec<WeightVector> {
        let n = self.n;
        match self.family {
            Family::Standard => (0..n).map(|i| unit_weight(n, &[(i, 1)])).collect(),
            Family::Dual => (0..n).map(|i| unit_weight(n, &[(i, -1)])).collect(),
            Family::Adjoint => (0..n)
                .flat_map(|i| (0..n).map(move |j| unit_weight(n, &[(i, 1), (j, -1)])))
                .collect(),
            Family::Lambda2 => index_pairs(n)
                .into_iter()
                .map(|(i, j)| unit_weight(n, &[(i, 1), (j, 1)]))
                .collect(),
            Family::Brackets => index_pairs(n)
                .into_iter()
                .flat_map(|(i, j)| (0..n).map(move |l| unit_weight(n, &[(l, 1), (i, -1), (j, -1)])))
                .collect(),
            Family::TorusWeights => self.weights.clone(),
        }
    }

    /// Human-readable name of each coordinate.
    pub fn coordinate_labels(&self) -> Vec<String> {
        let n = self.n;
        match self.family {
            Family::Standard => (1..=n).map(|i| format!("e{i}")).collect(),
            Family::Dual => (1..=n).map(|i| format!("e{i}^")).collect(),
            Family::Adjoint => (1..=n)
                .flat_map(|i| (1..=n).map(move |j| format!("E{i}{j}")))
                .collect(),
            Family::Lambda2 => index_pairs(n)
                .into_iter()
                .map(|(i, j)| format!("Phi(e{}^e{})", i + 1, j + 1))
                .collect(),
            Family::Brackets => index_pairs(n)
                .into_iter()
                .flat_map(|(i, j)| (0..n).map(move |l| format!("c^{}_{}{}", l + 1, i + 1, j + 1)))
                .collect(),
            Family::TorusWeights => self.weights.iter().map(|w| format!("x{w}")).collect(),
        }
    }

    fn check_coords(&self, coords: &Vector) -> Result<()> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(())
    }

    fn check_matrix(&self, g: &Matrix) -> Result<()> {
        if g.nrows() != self.n || g.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: g.nrows(),
            });
        }
        Ok(())
    }

    /// `ρ(g)` applied to raw coordinates.
    pub fn act_group(&self, g: &Matrix, coords: &Vector) -> Result<Vector> {
        self.check_coords(coords)?;
        self.check_matrix(g)?;
        let n = self.n;
        match self.family {
            Family::TorusWeights => {
                if !is_diagonal(g) {
                    return Err(Error::NonDiagonal);
                }
                if (0..n).any(|i| g[(i, i)] == 0.0) {
                    return Err(Error::Singular);
                }
                Ok(Vector::from_iterator(
                    coords.len(),
                    self.weights.iter().zip(coords.iter()).map(|(w, &c)| {
                        let scale: f64 = w
                            .0
                            .iter()
                            .enumerate()
                            .map(|(i, &e)| g[(i, i)].powi(e as i32))
                            .product();
                        scale * c
                    }),
                ))
            }
            Family::Standard => Ok(g * coords),
            Family::Dual => Ok(checked_inverse(g)?.transpose() * coords),
            Family::Adjoint => {
                let x = adjoint_matrix(n, coords);
                let gi = checked_inverse(g)?;
                Ok(adjoint_coords(&(g * x * gi)))
            }
            Family::Lambda2 => {
                let a = lambda2_matrix(n, coords);
                Ok(lambda2_coords(&(g * a * g.transpose())))
            }
            Family::Brackets => {
                let gi = checked_inverse(g)?;
                let t = FullBracket::from_coords(n, coords);
                Ok(t.base_change(g, &gi).to_coords())
            }
        }
    }

    /// `π(X)` applied to raw coordinates.
    pub fn act_lie(&self, x: &Matrix, coords: &Vector) -> Result<Vector> {
        self.check_coords(coords)?;
        self.check_matrix(x)?;
        let n = self.n;
        match self.family {
            Family::TorusWeights => {
                if !is_diagonal(x) {
                    return Err(Error::NonDiagonal);
                }
                Ok(Vector::from_iterator(
                    coords.len(),
                    self.weights
                        .iter()
                        .zip(coords.iter())
                        .map(|(w, &c)| w.pair_diag(x) * c),
                ))
            }
            Family::Standard => Ok(x * coords),
            Family::Dual => Ok(-(x.transpose() * coords)),
            Family::Adjoint => {
                let v = adjoint_matrix(n, coords);
                Ok(adjoint_coords(&(x * &v - &v * x)))
            }
            Family::Lambda2 => {
                let a = lambda2_matrix(n, coords);
                Ok(lambda2_coords(&(x * &a + &a * x.transpose())))
            }
            Family::Brackets => {
                let t = FullBracket::from_coords(n, coords);
                Ok(t.lie_action(x).to_coords())
            }
        }
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.family, self.n)
    }
}

pub(crate) fn adjoint_matrix(n: usize, coords: &Vector) -> Matrix {
    Matrix::from_row_slice(n, n, coords.as_slice())
}

pub(crate) fn adjoint_coords(x: &Matrix) -> Vector {
    let n = x.nrows();
    Vector::from_iterator(n * n, (0..n).flat_map(|i| (0..n).map(move |j| x[(i, j)])))
}

pub(crate) fn lambda2_matrix(n: usize, coords: &Vector) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    for (k, (i, j)) in index_pairs(n).into_iter().enumerate() {
        a[(i, j)] = coords[k];
        a[(j, i)] = -coords[k];
    }
    a
}

pub(crate) fn lambda2_coords(a: &Matrix) -> Vector {
    let pairs = index_pairs(a.nrows());
    Vector::from_iterator(pairs.len(), pairs.into_iter().map(|(i, j)| a[(i, j)]))
}

/// Fully expanded antisymmetric bracket tensor `T[l][i][j] = ⟨μ(e_i, e_j), e_l⟩`.
#[derive(Clone, Debug)]
pub(crate) struct FullBracket {
    n: usize,
    data: Vec<f64>,
}

impl FullBracket {
    fn idx(&self, l: usize, i: usize, j: usize) -> usize {
        (l * self.n + i) * self.n + j
    }

    pub(crate) fn get(&self, l: usize, i: usize, j: usize) -> f64 {
        self.data[self.idx(l, i, j)]
    }

    pub(crate) fn from_coords(n: usize, coords: &Vector) -> Self {
        let mut t = FullBracket {
            n,
            data: vec![0.0; n * n * n],
        };
        for (p, (i, j)) in index_pairs(n).into_iter().enumerate() {
            for l in 0..n {
                let c = coords[p * n + l];
                let a = t.idx(l, i, j);
                let b = t.idx(l, j, i);
                t.data[a] = c;
                t.data[b] = -c;
            }
        }
        t
    }

    pub(crate) fn to_coords(&self) -> Vector {
        let n = self.n;
        let pairs = index_pairs(n);
        let mut out = Vector::zeros(pairs.len() * n);
        for (p, (i, j)) in pairs.into_iter().enumerate() {
            for l in 0..n {
                out[p * n + l] = self.get(l, i, j);
            }
        }
        out
    }

    /// `(g·μ)(x, y) = g μ(g⁻¹x, g⁻¹y)`.
    fn base_change(&self, g: &Matrix, gi: &Matrix) -> Self {
        let n = self.n;
        // first contract both inputs with g⁻¹, then the output with g
        let mut inner = vec![0.0; n * n * n];
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for i in 0..n {
                        let gia = gi[(i, a)];
                        if gia == 0.0 {
                            continue;
                        }
                        for j in 0..n {
                            s += gia * gi[(j, b)] * self.get(m, i, j);
                        }
                    }
                    inner[(m * n + a) * n + b] = s;
                }
            }
        }
        let mut data = vec![0.0; n * n * n];
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += g[(l, m)] * inner[(m * n + a) * n + b];
                    }
                    data[(l * n + a) * n + b] = s;
                }
            }
        }
        FullBracket { n, data }
    }

    /// `(π(X)μ)(x, y) = Xμ(x, y) - μ(Xx, y) - μ(x, Xy)`.
    fn lie_action(&self, x: &Matrix) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n * n];
        for l in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += x[(l, m)] * self.get(m, a, b);
                        s -= x[(m, a)] * self.get(l, m, b);
                        s -= x[(m, b)] * self.get(l, a, m);
                    }
                    data[(l * n + a) * n + b] = s;
                }
            }
        }
        FullBracket { n, data }
    }
}

/// A vector of a representation together with its family.
#[derive(Clone, Debug, PartialEq)]
pub struct RepVector {
    spec: RepSpec,
    coords: Vector,
}

impl RepVector {
    pub fn new(spec: RepSpec, coords: Vector) -> Result<Self> {
        spec.check_coords(&coords)?;
        Ok(RepVector { spec, coords })
    }

    pub fn from_slice(spec: RepSpec, coords: &[f64]) -> Result<Self> {
        Self::new(spec, Vector::from_column_slice(coords))
    }

    /// The vector with a single non-zero coordinate.
    pub fn basis(spec: RepSpec, k: usize) -> Result<Self> {
        let dim = spec.dim();
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: k,
            });
        }
        let mut coords = Vector::zeros(dim);
        coords[k] = 1.0;
        Ok(RepVector { spec, coords })
    }

    /// An element of `gl_n` in the adjoint representation.
    pub fn from_matrix(x: &Matrix) -> Result<Self> {
        let spec = RepSpec::new(Family::Adjoint, x.nrows())?;
        Self::new(spec, adjoint_coords(x))
    }

    pub fn spec(&self) -> &RepSpec {
        &self.spec
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        self.spec.norm(&self.coords)
    }

    pub fn scaled(&self, c: f64) -> Self {
        RepVector {
            spec: self.spec.clone(),
            coords: &self.coords * c,
        }
    }

    /// The matrix this vector stands for (Adjoint: `x`; Lambda2: the skew matrix `A`).
    pub fn as_matrix(&self) -> Option<Matrix> {
        match self.spec.family {
            Family::Adjoint => Some(adjoint_matrix(self.spec.n, &self.coords)),
            Family::Lambda2 => Some(lambda2_matrix(self.spec.n, &self.coords)),
            _ => None,
        }
    }
}

fn ensure_same_spec(spec: &RepSpec, v: &RepVector) -> Result<()> {
    if &v.spec != spec {
        return Err(Error::Unsupported(format!(
            "vector belongs to {} but {} was requested",
            v.spec, spec
        )));
    }
    Ok(())
}

pub fn rep_dim(spec: &RepSpec) -> usize {
    spec.dim()
}

pub fn apply_group(spec: &RepSpec, g: &Matrix, v: &RepVector) -> Result<RepVector> {
    ensure_same_spec(spec, v)?;
    Ok(RepVector {
        spec: spec.clone(),
        coords: spec.act_group(g, &v.coords)?,
    })
}

pub fn apply_lie(spec: &RepSpec, x: &Matrix, v: &RepVector) -> Result<RepVector> {
    ensure_same_spec(spec, v)?;
    Ok(RepVector {
        spec: spec.clone(),
        coords: spec.act_lie(x, &v.coords)?,
    })
}

pub fn weights_of(spec: &RepSpec) -> Vec<WeightVector> {
    spec.weights()
}

/// Components of `v` grouped by torus weight; components with norm at most
/// `zero_tol·‖v‖` are dropped.
pub fn weight_components(
    spec: &RepSpec,
    v: &RepVector,
    zero_tol: f64,
) -> Result<BTreeMap<WeightVector, Vec<f64>>> {
    ensure_same_spec(spec, v)?;
    let total = v.coords.norm();
    if total == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut groups: BTreeMap<WeightVector, Vec<f64>> = BTreeMap::new();
    for (w, &c) in spec.weights().into_iter().zip(v.coords.iter()) {
        groups.entry(w).or_default().push(c);
    }
    groups.retain(|_, comp| {
        let norm = comp.iter().map(|c| c * c).sum::<f64>().sqrt();
        norm > zero_tol * total
    });
    Ok(groups)
}

/// Coordinates of `Φ(x∧y) = xyᵀ - yxᵀ` in the Lambda2 basis.
pub fn lambda2_embed(x: &[f64], y: &[f64]) -> Result<RepVector> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len();
    let spec = RepSpec::new(Family::Lambda2, n)?;
    let coords = Vector::from_iterator(
        n * (n - 1) / 2,
        index_pairs(n)
            .into_iter()
            .map(|(i, j)| x[i] * y[j] - y[i] * x[j]),
    );
    RepVector::new(spec, coords)
}

/// JSON vector document shared with the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorDocument {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    pub coords: Vec<f64>,
}

impl VectorDocument {
    pub fn from_vector(v: &RepVector) -> Self {
        let torus = v.spec.family == Family::TorusWeights;
        VectorDocument {
            family: v.spec.family.to_string(),
            n: if torus { None } else { Some(v.spec.n) },
            weights: torus.then(|| v.spec.weights.iter().map(|w| w.0.clone()).collect()),
            coords: v.coords.iter().copied().collect(),
        }
    }

    pub fn to_vector(&self) -> Result<RepVector> {
        let family: Family = self.family.parse()?;
        let spec = if family == Family::TorusWeights {
            let weights = self
                .weights
                .as_ref()
                .ok_or_else(|| Error::Parse("TorusWeights document needs `weights`".into()))?;
            RepSpec::torus(weights.iter().cloned().map(WeightVector).collect())?
        } else {
            let n = self
                .n
                .ok_or_else(|| Error::Parse("vector document needs `n`".into()))?;
            RepSpec::new(family, n)?
        };
        RepVector::from_slice(spec, &self.coords)
    }
}
