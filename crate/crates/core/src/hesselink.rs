//! Exact combinatorial instability for the diagonal torus.
//!
//! Everything here runs in exact rational arithmetic: states, measures of
//! instability, minimum-norm points of weight polytopes (with a KKT
//! certificate), optimal classes, label enumeration and stratum membership.
//! [`kn_label_via_flow`] compares the exact label with the spectrum reached by
//! the numerical gradient flow.
//!
//! Semistability for the Levi part `H_β` is only decided for the torus, via the
//! zero-in-hull test on the projected state; non-abelian `H_β` is not handled.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::{weyl_normalize, CartanContext, GroupKind};
use crate::error::{Error, Result};
use crate::flows::{gradient_flow, FlowParams};
use crate::linalg::{Matrix, Vector};
use crate::rational::{affine_minimizer, combine, int, Rational, RationalVector};
use crate::reps::{weight_components, RepSpec, RepVector, WeightVector, DEFAULT_ZERO_TOL};

/// Default cap on the number of distinct weights [`enumerate_labels`] accepts.
pub const DEFAULT_WEIGHT_CAP: usize = 20;

/// Maximal spectrum deviation accepted by [`kn_label_via_flow`].
pub const KN_MATCH_TOL: f64 = 1e-5;

impl From<&WeightVector> for RationalVector {
    fn from(w: &WeightVector) -> Self {
        RationalVector::from_ints(&w.0)
    }
}

/// `R(v, A)`: weights whose component of `v` is non-zero, in lexicographic order.
pub fn state_of(spec: &RepSpec, v: &RepVector, zero_tol: f64) -> Result<Vec<WeightVector>> {
    Ok(weight_components(spec, v, zero_tol)?.into_keys().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstabilityMeasure {
    Finite(Rational),
    NegInfinity,
}

/// `min ⟨χ, η⟩` over the state, or `-∞` once that minimum is negative.
pub fn instability_measure(
    state: &[WeightVector],
    eta: &RationalVector,
) -> Result<InstabilityMeasure> {
    let mut best: Option<Rational> = None;
    for chi in state {
        if chi.len() != eta.len() {
            return Err(Error::DimensionMismatch {
                expected: eta.len(),
                got: chi.len(),
            });
        }
        let value = RationalVector::from(chi).dot(eta);
        best = Some(match best {
            Some(b) if b <= value => b,
            _ => value,
        });
    }
    let min = best.ok_or(Error::EmptyWeights)?;
    if min.is_negative() {
        Ok(InstabilityMeasure::NegInfinity)
    } else {
        Ok(InstabilityMeasure::Finite(min))
    }
}

/// The minimum-norm point of a convex hull with its optimality certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct MinNormCertificate {
    pub eta: RationalVector,
    pub q: Rational,
    pub support: Vec<RationalVector>,
    pub coefficients: Vec<Rational>,
    /// `min_χ ⟨χ, η⟩ - q` over all inputs; non-negative exactly at the optimum.
    pub optimality_margin: Rational,
}

impl MinNormCertificate {
    /// Re-checks every certificate identity against the input set.
    pub fn verify(&self, weights: &[RationalVector]) -> bool {
        let support: Vec<&RationalVector> = self.support.iter().collect();
        let total: Rational = self.coefficients.iter().fold(Rational::zero(), |a, c| a + c);
        let recombined = combine(&support, &self.coefficients);
        let margin = weights
            .iter()
            .map(|w| w.dot(&self.eta) - &self.q)
            .min();
        total == int(1)
            && self.coefficients.iter().all(|c| c.is_positive())
            && recombined == self.eta
            && self.q == self.eta.norm2()
            && self.support.iter().all(|s| s.dot(&self.eta) == self.q)
            && self.support.iter().all(|s| weights.contains(s))
            && margin.as_ref() == Some(&self.optimality_margin)
            && !self.optimality_margin.is_negative()
    }
}

/// Exact minimum-norm point of `conv(weights)`.
///
/// Wolfe's nearest-point method: each major cycle adds the input most violating
/// `⟨χ, x⟩ ≥ ⟨x, x⟩`, each minor cycle moves to the affine minimizer of the
/// corral and drops points whose barycentric weight reaches zero. Ties go to
/// the lexicographically smallest weight.
pub fn min_norm_point(weights: &[RationalVector]) -> Result<MinNormCertificate> {
    let first = weights.first().ok_or(Error::EmptyWeights)?;
    let dim = first.len();
    if let Some(bad) = weights.iter().find(|w| w.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    let points: Vec<RationalVector> = weights
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let start = (0..points.len())
        .min_by(|&a, &b| points[a].norm2().cmp(&points[b].norm2()))
        .expect("non-empty");
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<Rational> = vec![int(1)];
    let mut x = points[start].clone();

    loop {
        let xx = x.norm2();
        if xx.is_zero() {
            break;
        }
        let (entering, value) = points
            .iter()
            .enumerate()
            .map(|(j, p)| (j, p.dot(&x)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("non-empty");
        if value >= xx {
            break;
        }
        if corral.contains(&entering) {
            // cannot happen in exact arithmetic: corral points satisfy ⟨p, x⟩ = ⟨x, x⟩
            return Err(Error::Unsupported("min-norm iteration stalled".into()));
        }
        corral.push(entering);
        lambda.push(Rational::zero());

        loop {
            let members: Vec<&RationalVector> = corral.iter().map(|&k| &points[k]).collect();
            let alpha = affine_minimizer(&members)
                .ok_or_else(|| Error::Unsupported("corral became affinely dependent".into()))?;
            if alpha.iter().all(|a| a.is_positive()) {
                x = combine(&members, &alpha);
                lambda = alpha;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, a)| !a.is_positive())
                .map(|(l, a)| l / (l - a))
                .min()
                .expect("some coefficient is non-positive");
            let one_minus = int(1) - &theta;
            lambda = lambda
                .iter()
                .zip(&alpha)
                .map(|(l, a)| &theta * a + &one_minus * l)
                .collect();
            let mut k = 0;
            while k < corral.len() {
                if lambda[k].is_zero() {
                    corral.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
        }
    }

    let q = x.norm2();
    let optimality_margin = points
        .iter()
        .map(|p| p.dot(&x) - &q)
        .min()
        .expect("non-empty");
    let mut pairs: Vec<(RationalVector, Rational)> = corral
        .iter()
        .map(|&k| points[k].clone())
        .zip(lambda)
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (support, coefficients) = pairs.into_iter().unzip();
    Ok(MinNormCertificate {
        eta: x,
        q,
        support,
        coefficients,
        optimality_margin,
    })
}

/// A non-zero Hesselink stratum label.
#[derive(Clone, Debug, PartialEq)]
pub struct HesselinkLabel {
    /// `η`, Weyl-normalized (non-increasing).
    pub eta: RationalVector,
    /// `η` in the coordinates of the torus it was computed for.
    pub torus_eta: RationalVector,
    /// `q(η) = ⟨η, η⟩`.
    pub q: Rational,
    /// `η / q(η)`, the optimal-class representative, Weyl-normalized.
    pub eta_normalized: RationalVector,
    /// `Lie(η)`, the diagonal matrix of the Weyl-normalized `η`.
    pub beta: Matrix,
}

impl HesselinkLabel {
    pub fn from_eta(torus_eta: RationalVector) -> Result<Self> {
        if torus_eta.is_zero() {
            return Err(Error::ZeroLabel);
        }
        let q = torus_eta.norm2();
        let eta = RationalVector(weyl_normalize(&torus_eta.0));
        let eta_normalized = eta.scale(&(int(1) / &q));
        let beta = Matrix::from_diagonal(&Vector::from_vec(eta.to_f64()));
        Ok(HesselinkLabel {
            eta,
            torus_eta,
            q,
            eta_normalized,
            beta,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OptimalClass {
    /// `0 ∈ conv R(v, A)`: not in the null cone of the torus.
    Semistable,
    Unstable(HesselinkLabel),
}

impl OptimalClass {
    pub fn label(&self) -> Option<&HesselinkLabel> {
        match self {
            OptimalClass::Semistable => None,
            OptimalClass::Unstable(l) => Some(l),
        }
    }
}

pub fn optimal_class(spec: &RepSpec, v: &RepVector) -> Result<OptimalClass> {
    optimal_class_for_group(GroupKind::GL, spec, v)
}

/// Optimal class for the diagonal torus of `GL_n` or of `SL_n`; for `SL_n` the
/// state is first projected onto the trace-zero hyperplane.
pub fn optimal_class_for_group(
    group: GroupKind,
    spec: &RepSpec,
    v: &RepVector,
) -> Result<OptimalClass> {
    let state = state_of(spec, v, DEFAULT_ZERO_TOL)?;
    let points: Vec<RationalVector> = state
        .iter()
        .map(|w| {
            let r = RationalVector::from(w);
            match group {
                GroupKind::GL => r,
                GroupKind::SL => project_to_sl(&r),
            }
        })
        .collect();
    let cert = min_norm_point(&points)?;
    if cert.eta.is_zero() {
        Ok(OptimalClass::Semistable)
    } else {
        Ok(OptimalClass::Unstable(HesselinkLabel::from_eta(cert.eta)?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelEnumeration {
    /// Distinct non-zero labels up to the Weyl group, by `q` descending then lexicographic.
    pub labels: Vec<HesselinkLabel>,
    /// Whether some subset of weights contains `0` in its hull.
    pub includes_zero: bool,
}

/// Minimum-norm points of every non-empty subset of the distinct weights.
pub fn enumerate_labels(spec: &RepSpec, max_weight_count: usize) -> Result<LabelEnumeration> {
    let distinct: Vec<RationalVector> = spec
        .weights()
        .iter()
        .map(RationalVector::from)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let count = distinct.len();
    if count > max_weight_count {
        return Err(Error::TooManyWeights {
            count,
            cap: max_weight_count,
        });
    }
    if count == 0 {
        return Err(Error::EmptyWeights);
    }
    let found: Vec<RationalVector> = (1u64..(1u64 << count))
        .into_par_iter()
        .map(|mask| {
            let subset: Vec<RationalVector> = (0..count)
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| distinct[k].clone())
                .collect();
            min_norm_point(&subset).map(|c| RationalVector(weyl_normalize(&c.eta.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let unique: BTreeSet<RationalVector> = found.into_iter().collect();
    let includes_zero = unique.iter().any(|e| e.is_zero());
    let mut labels = unique
        .into_iter()
        .filter(|e| !e.is_zero())
        .map(HesselinkLabel::from_eta)
        .collect::<Result<Vec<_>>>()?;
    labels.sort_by(|a, b| b.q.cmp(&a.q).then_with(|| a.eta.cmp(&b.eta)));
    Ok(LabelEnumeration {
        labels,
        includes_zero,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport {
    /// `diag(η)` in torus coordinates.
    pub beta: Matrix,
    pub q: Rational,
    /// `r(χ) = ⟨χ, η⟩ - q`, the `π(β)⁺`-eigenvalue, for each state weight.
    pub grading: BTreeMap<WeightVector, Rational>,
    pub in_v_ge0: bool,
    /// `p_β(v)`: the coordinates of `v` with `r = 0`.
    pub v0: RepVector,
    pub in_u_ge0: bool,
    /// Whether the optimal class of `v` is exactly this label (the equivalent test).
    pub optimal_class_matches: bool,
}

/// Membership of `v` in `V^{≥0}` and `U^{≥0}` for the label's `β`.
pub fn stratum_membership(
    spec: &RepSpec,
    v: &RepVector,
    label: &HesselinkLabel,
) -> Result<StratumReport> {
    let eta = &label.torus_eta;
    if eta.is_zero() {
        return Err(Error::ZeroLabel);
    }
    if eta.len() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: eta.len(),
        });
    }
    let q = eta.norm2();
    let state = state_of(spec, v, DEFAULT_ZERO_TOL)?;
    let grade = |w: &WeightVector| RationalVector::from(w).dot(eta) - &q;
    let grading: BTreeMap<WeightVector, Rational> =
        state.iter().map(|w| (w.clone(), grade(w))).collect();
    let in_v_ge0 = grading.values().all(|r| !r.is_negative());

    let weights = spec.weights();
    let mut coords0 = v.coords().clone();
    for (k, w) in weights.iter().enumerate() {
        if !grade(w).is_zero() {
            coords0[k] = 0.0;
        }
    }
    let v0 = RepVector::new(spec.clone(), coords0)?;
    let v0_nonzero = v0.coords().norm() > DEFAULT_ZERO_TOL * v.coords().norm();

    let in_u_ge0 = in_v_ge0 && v0_nonzero && {
        let inv_q = int(1) / &q;
        let projected: Vec<RationalVector> = state_of(spec, &v0, DEFAULT_ZERO_TOL)?
            .iter()
            .map(|w| {
                let chi = RationalVector::from(w);
                let along = eta.scale(&(chi.dot(eta) * &inv_q));
                &chi - &along
            })
            .collect();
        min_norm_point(&projected)?.eta.is_zero()
    };

    let optimal_class_matches = match optimal_class(spec, v)? {
        OptimalClass::Unstable(l) => &l.torus_eta == eta,
        OptimalClass::Semistable => false,
    };

    Ok(StratumReport {
        beta: Matrix::from_diagonal(&Vector::from_vec(eta.to_f64())),
        q,
        grading,
        in_v_ge0,
        v0,
        in_u_ge0,
        optimal_class_matches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnComparison {
    /// Spectrum of the flow's limit moment, non-increasing.
    pub spectrum: Vec<f64>,
    #[serde(skip)]
    pub hesselink: HesselinkLabel,
    pub max_deviation: f64,
    pub converged: bool,
    pub matched: bool,
    pub diagnostic: Option<String>,
}

/// Runs the gradient flow from `v` and compares its limit spectrum with the
/// exact label, using [`KN_MATCH_TOL`].
///
/// The comparison is only meaningful when the diagonal torus is optimal for `v`.
pub fn kn_label_via_flow(
    ctx: &CartanContext,
    spec: &RepSpec,
    v: &RepVector,
    params: &FlowParams,
) -> Result<KnComparison> {
    kn_label_via_flow_with_tol(ctx, spec, v, params, KN_MATCH_TOL)
}

pub fn kn_label_via_flow_with_tol(
    ctx: &CartanContext,
    spec: &RepSpec,
    v: &RepVector,
    params: &FlowParams,
    match_tol: f64,
) -> Result<KnComparison> {
    let label = match optimal_class_for_group(ctx.group(), spec, v)? {
        OptimalClass::Semistable => return Err(Error::Semistable),
        OptimalClass::Unstable(l) => l,
    };
    let flow = gradient_flow(ctx, spec, v, params)?;
    let spectrum = flow.limit_moment.spectrum.clone();
    let target = label.eta.to_f64();
    let max_deviation = spectrum
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let matched = flow.converged && max_deviation <= match_tol;
    let diagnostic = if flow.converged {
        flow.diagnostic.clone()
    } else {
        Some(flow.diagnostic.clone().unwrap_or_else(|| {
            format!(
                "flow did not converge by t = {}; final residual {:e}",
                flow.final_time(),
                flow.final_residual()
            )
        }))
    };
    Ok(KnComparison {
        spectrum,
        hesselink: label,
        max_deviation,
        converged: flow.converged,
        matched,
        diagnostic,
    })
}

/// Orthogonal projection `η - (Σηᵢ/n)(1, …, 1)` onto the trace-zero hyperplane.
pub fn project_to_sl(eta: &RationalVector) -> RationalVector {
    if eta.is_empty() {
        return eta.clone();
    }
    let mean = eta.sum() / int(eta.len() as i64);
    RationalVector(eta.0.iter().map(|c| c - &mean).collect())
}

/// Gram matrix of cocharacters under the trace form; integral by construction.
pub fn cochar_gram_check(lams: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let dim = lams.first().map_or(0, Vec::len);
    if let Some(bad) = lams.iter().find(|l| l.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    lams.iter()
        .map(|a| {
            lams.iter()
                .map(|b| {
                    let s: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
                    s.to_i64()
                        .ok_or_else(|| Error::Unsupported("Gram entry overflows i64".into()))
                })
                .collect()
        })
        .collect()
}
