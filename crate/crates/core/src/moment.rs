//! Moment map, energy and criticality.
//!
//! `m(v) ∈ p` is fixed by `⟨m(v), X⟩ = ⟨π(X)v, v⟩ / ⟨v, v⟩` for all `X ∈ p`.
//! The generic evaluation expands over the orthonormal basis of `p`; the
//! per-family closed forms exist to cross-check it.

use serde::Serialize;

use crate::cartan::CartanContext;
use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, symmetric_spectrum_desc, symmetrize, Matrix, Vector};
use crate::reps::{adjoint_matrix, lambda2_matrix, Family, RepSpec, RepVector};

/// Vectors shorter than this are treated as zero.
pub const ZERO_NORM: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentValue {
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub matrix: Matrix,
    pub energy: f64,
    /// Eigenvalues of `matrix`, non-increasing.
    pub spectrum: Vec<f64>,
}

impl MomentValue {
    pub fn from_matrix(matrix: Matrix) -> Self {
        let matrix = symmetrize(&matrix);
        let energy = matrix.dot(&matrix);
        let spectrum = symmetric_spectrum_desc(&matrix);
        MomentValue {
            matrix,
            energy,
            spectrum,
        }
    }
}

fn check_context(ctx: &CartanContext, spec: &RepSpec) -> Result<()> {
    if ctx.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: ctx.n(),
            got: spec.n(),
        });
    }
    Ok(())
}

/// The part of `p` the representation is defined on: all of `p`, or only
/// `a` for an abstract torus representation.
pub(crate) fn moment_basis<'a>(ctx: &'a CartanContext, spec: &RepSpec) -> &'a [Matrix] {
    if spec.family() == Family::TorusWeights {
        ctx.torus_basis()
    } else {
        ctx.p_basis()
    }
}

/// Moment map of raw coordinates; see [`moment`].
pub fn moment_of_coords(ctx: &CartanContext, spec: &RepSpec, coords: &Vector) -> Result<Matrix> {
    check_context(ctx, spec)?;
    let norm2 = spec.inner(coords, coords);
    if !(norm2.sqrt() >= ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    let n = ctx.n();
    let mut m = Matrix::zeros(n, n);
    for b in moment_basis(ctx, spec) {
        let c = spec.inner(&spec.act_lie(b, coords)?, coords) / norm2;
        m += b * c;
    }
    Ok(m)
}

pub fn moment(ctx: &CartanContext, spec: &RepSpec, v: &RepVector) -> Result<MomentValue> {
    ensure_spec(spec, v)?;
    Ok(MomentValue::from_matrix(moment_of_coords(ctx, spec, v.coords())?))
}

pub fn energy(ctx: &CartanContext, spec: &RepSpec, v: &RepVector) -> Result<f64> {
    ensure_spec(spec, v)?;
    let m = moment_of_coords(ctx, spec, v.coords())?;
    Ok(m.dot(&m))
}

fn ensure_spec(spec: &RepSpec, v: &RepVector) -> Result<()> {
    if v.spec() != spec {
        return Err(Error::Unsupported(format!(
            "vector belongs to {} but {} was requested",
            v.spec(),
            spec
        )));
    }
    Ok(())
}

/// Per-family closed form of the `GL_n` moment map.
///
/// Lambda2 uses the isometric norm `‖A‖² = -½ tr(A²)`.
pub fn closed_form_moment(spec: &RepSpec, v: &RepVector) -> Result<MomentValue> {
    ensure_spec(spec, v)?;
    let n = spec.n();
    let x = v.coords();
    let norm2 = spec.inner(x, x);
    if !(norm2.sqrt() >= ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    let m = match spec.family() {
        Family::Standard => x * x.transpose() / norm2,
        Family::Dual => -(x * x.transpose()) / norm2,
        Family::Adjoint => {
            let a = adjoint_matrix(n, x);
            (&a * a.transpose() - a.transpose() * &a) / norm2
        }
        Family::Lambda2 => {
            let a = lambda2_matrix(n, x);
            -(&a * &a) / norm2
        }
        Family::Brackets => {
            // ⟨m(μ)y, y⟩ ‖μ‖² = Σ_{i,j} ⟨μ(e_i,e_j), y⟩² - 2 Σ_j ‖μ(y, e_j)‖², polarized
            let t = crate::reps::FullBracket::from_coords(n, x);
            let mut m = Matrix::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    let mut first = 0.0;
                    let mut second = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            first += t.get(a, i, j) * t.get(b, i, j);
                        }
                    }
                    for j in 0..n {
                        for l in 0..n {
                            second += t.get(l, a, j) * t.get(l, b, j);
                        }
                    }
                    m[(a, b)] = (first - 2.0 * second) / norm2;
                }
            }
            m
        }
        Family::TorusWeights => {
            return Err(Error::Unsupported(
                "no closed form for torus representations".into(),
            ))
        }
    };
    Ok(MomentValue::from_matrix(m))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslatedMoment {
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    pub matrix: Matrix,
    /// Whether `h⁻¹·matrix·h` is symmetric, i.e. `matrix ∈ Ad_h(p)`.
    pub in_ad_h_p: bool,
}

/// `Ad_h(m(ρ(h)⁻¹ v))`, the moment map for the translated metric `h·ḡ`.
pub fn translated_moment(
    ctx: &CartanContext,
    spec: &RepSpec,
    h: &Matrix,
    v: &RepVector,
) -> Result<TranslatedMoment> {
    ensure_spec(spec, v)?;
    let h_inv = checked_inverse(h)?;
    let pulled = spec.act_group(&h_inv, v.coords())?;
    let m = moment_of_coords(ctx, spec, &pulled)?;
    let matrix = h * &m * &h_inv;
    let back = &h_inv * &matrix * h;
    let scale = back.amax().max(1.0);
    let in_ad_h_p = crate::linalg::asymmetry(&back) <= 1e-10 * scale;
    Ok(TranslatedMoment { matrix, in_ad_h_p })
}

/// `‖π(m(v))v - F(v)v‖ / ‖v‖` from raw coordinates.
pub fn criticality_residual_of_coords(
    ctx: &CartanContext,
    spec: &RepSpec,
    coords: &Vector,
) -> Result<f64> {
    let m = moment_of_coords(ctx, spec, coords)?;
    let f = m.dot(&m);
    let moved = spec.act_lie(&m, coords)?;
    Ok(spec.norm(&(moved - coords * f)) / spec.norm(coords))
}

/// Zero exactly when `v` spans a fixed direction of the gradient flow.
pub fn criticality_residual(ctx: &CartanContext, spec: &RepSpec, v: &RepVector) -> Result<f64> {
    ensure_spec(spec, v)?;
    criticality_residual_of_coords(ctx, spec, v.coords())
}
