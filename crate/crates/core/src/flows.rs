//! Gradient flow on `V`, the companion flow on `G`, and the metric flow on
//! symmetric positive-definite matrices.
//!
//! Along the raw flows `v(t) = ρ(h(t))·v̄` and `S(t) = h(t)ᵀh(t)`;
//! [`verify_flow_equivalence`] integrates the three independently and measures
//! both identities.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cartan::{spd_sqrt, CartanContext};
use crate::error::{Error, Result};
use crate::integrator::{StepControl, Stepper};
use crate::linalg::{checked_inverse, ensure_symmetric, sorted_symmetric_eigen, symmetrize, Matrix, Vector};
use crate::moment::{criticality_residual_of_coords, moment_of_coords, MomentValue};
use crate::reps::{RepSpec, RepVector};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowParams {
    pub dt0: f64,
    pub t_max: f64,
    pub residual_tol: f64,
    pub max_steps: usize,
    /// Time between recorded samples.
    pub sample_stride: f64,
    /// Project back to the unit sphere after each accepted step.
    pub renormalize: bool,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams {
            dt0: 1e-2,
            t_max: 1e3,
            residual_tol: 1e-9,
            max_steps: 1_000_000,
            sample_stride: 0.1,
            renormalize: true,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.dt0, self.t_max, self.residual_tol, self.sample_stride]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0);
        if !positive || self.max_steps == 0 {
            return Err(Error::Flow("flow parameters must be positive".into()));
        }
        if self.residual_tol >= 1.0 {
            return Err(Error::Flow("residual_tol must be below 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    pub energy: f64,
    pub residual: f64,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowResult {
    pub samples: Vec<FlowSample>,
    pub converged: bool,
    /// Unit-norm final direction.
    #[serde(skip)]
    pub limit: RepVector,
    pub limit_moment: MomentValue,
    /// Largest increase of `F` over a single accepted step.
    pub max_energy_increase: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub diagnostic: Option<String>,
}

impl FlowResult {
    pub fn energy_trace(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.energy)).collect()
    }

    pub fn residual_trace(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.residual)).collect()
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn final_residual(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.residual)
    }

    /// Columns `t, F, residual`, then one column per coordinate.
    pub fn to_csv(&self, coordinate_labels: &[String]) -> String {
        let mut out = String::from("t,F,residual");
        for l in coordinate_labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for s in &self.samples {
            let _ = write!(out, "{:.16e},{:.16e},{:.16e}", s.t, s.energy, s.residual);
            for c in &s.coords {
                let _ = write!(out, ",{c:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// A symmetric positive-definite `n×n` matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpdMetric {
    #[serde(serialize_with = "crate::io::serialize_matrix")]
    s: Matrix,
}

impl SpdMetric {
    pub fn new(s: Matrix) -> Result<Self> {
        ensure_symmetric(&s)?;
        let s = symmetrize(&s);
        let (values, _) = sorted_symmetric_eigen(&s);
        if !(values[0] > 0.0) {
            return Err(Error::NotPositiveDefinite(values[0]));
        }
        Ok(SpdMetric { s })
    }

    pub fn identity(n: usize) -> Self {
        SpdMetric {
            s: Matrix::identity(n, n),
        }
    }

    /// `hᵀh` for an invertible `h`.
    pub fn from_group(h: &Matrix) -> Result<Self> {
        checked_inverse(h)?;
        SpdMetric::new(h.transpose() * h)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.s
    }
}

fn check_vector(ctx: &CartanContext, spec: &RepSpec, v: &RepVector) -> Result<()> {
    if v.spec() != spec || spec.n() != ctx.n() {
        return Err(Error::DimensionMismatch {
            expected: ctx.n(),
            got: v.spec().n(),
        });
    }
    if !(v.norm() > crate::moment::ZERO_NORM) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `−π(m(v))·v`.
fn gradient_field(ctx: &CartanContext, spec: &RepSpec, v: &Vector) -> Result<Vector> {
    let m = moment_of_coords(ctx, spec, v)?;
    Ok(-spec.act_lie(&m, v)?)
}

fn energy_of(ctx: &CartanContext, spec: &RepSpec, v: &Vector) -> Result<f64> {
    let m = moment_of_coords(ctx, spec, v)?;
    Ok(m.dot(&m))
}

/// Sample times `0, stride, 2·stride, …` capped at `t_max`.
fn next_sample(t: f64, stride: f64, t_max: f64) -> f64 {
    let k = (t / stride + 1e-9).floor() + 1.0;
    (k * stride).min(t_max)
}

/// Integrates `v′ = −π(m(v))·v` until the criticality residual drops below
/// `residual_tol`, or until `t_max`/`max_steps`.
///
/// Running out of time or hitting a step underflow is not an error: the result
/// carries `converged = false`, the last state, and a diagnostic.
pub fn gradient_flow(
    ctx: &CartanContext,
    spec: &RepSpec,
    v0: &RepVector,
    params: &FlowParams,
) -> Result<FlowResult> {
    params.validate()?;
    check_vector(ctx, spec, v0)?;
    let mut v = v0.coords().clone();
    if params.renormalize {
        v /= spec.norm(&v);
    }
    let mut f = |_t: f64, y: &Vector| gradient_field(ctx, spec, y);
    let mut stepper = Stepper::new(params.dt0, StepControl::default(), vec![]);

    let mut t = 0.0;
    let mut energy = energy_of(ctx, spec, &v)?;
    let mut residual = criticality_residual_of_coords(ctx, spec, &v)?;
    let mut samples = vec![FlowSample {
        t,
        energy,
        residual,
        coords: v.iter().copied().collect(),
    }];
    let mut converged = residual <= params.residual_tol;
    let mut max_energy_increase: f64 = 0.0;
    let mut diagnostic = None;
    let mut next = next_sample(t, params.sample_stride, params.t_max);

    while !converged && t < params.t_max {
        if stepper.accepted >= params.max_steps {
            diagnostic = Some(format!("max_steps = {} reached at t = {t}", params.max_steps));
            break;
        }
        let step = match stepper.advance(&mut f, t, &v, next - t) {
            Ok(step) => step,
            Err(Error::Flow(msg)) => {
                diagnostic = Some(msg);
                break;
            }
            Err(e) => return Err(e),
        };
        t = if next - t <= step.h { next } else { t + step.h };
        v = step.y;
        if params.renormalize {
            v /= spec.norm(&v);
        }
        let e = energy_of(ctx, spec, &v)?;
        max_energy_increase = max_energy_increase.max(e - energy);
        energy = e;
        residual = criticality_residual_of_coords(ctx, spec, &v)?;
        converged = residual <= params.residual_tol;
        if t >= next || converged {
            samples.push(FlowSample {
                t,
                energy,
                residual,
                coords: v.iter().copied().collect(),
            });
            if t >= next {
                next = next_sample(t, params.sample_stride, params.t_max);
            }
        }
    }
    if samples.last().map(|s| s.t) != Some(t) {
        samples.push(FlowSample {
            t,
            energy,
            residual,
            coords: v.iter().copied().collect(),
        });
    }
    if !converged && diagnostic.is_none() {
        diagnostic = Some(format!(
            "not converged by t = {t}; residual {residual:e} > {:e}",
            params.residual_tol
        ));
    }
    let unit = &v / spec.norm(&v);
    let limit_moment = MomentValue::from_matrix(moment_of_coords(ctx, spec, &unit)?);
    Ok(FlowResult {
        samples,
        converged,
        limit: RepVector::new(spec.clone(), unit)?,
        limit_moment,
        max_energy_increase,
        accepted_steps: stepper.accepted,
        rejected_steps: stepper.rejected,
        diagnostic,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupFlowSample {
    pub t: f64,
    pub v: Vector,
    pub h: Matrix,
}

fn to_state(v: &Vector, h: &Matrix) -> Vector {
    let mut y = Vector::zeros(v.len() + h.len());
    y.rows_mut(0, v.len()).copy_from(v);
    y.rows_mut(v.len(), h.len()).copy_from_slice(h.as_slice());
    y
}

fn from_state(y: &Vector, dim: usize, n: usize) -> (Vector, Matrix) {
    let v = y.rows(0, dim).into_owned();
    let h = Matrix::from_column_slice(n, n, y.rows(dim, n * n).as_slice());
    (v, h)
}

/// Runs one of the fixed-horizon flows, sampling at multiples of `sample_stride`.
fn integrate_fixed<F>(
    y0: Vector,
    blocks: Vec<std::ops::Range<usize>>,
    horizon: f64,
    params: &FlowParams,
    mut f: F,
    mut after_step: impl FnMut(&mut Vector) -> Result<()>,
) -> Result<Vec<(f64, Vector)>>
where
    F: FnMut(f64, &Vector) -> Result<Vector>,
{
    params.validate()?;
    if !(horizon >= 0.0) {
        return Err(Error::Flow("horizon must be non-negative".into()));
    }
    let mut stepper = Stepper::new(params.dt0, StepControl::default(), blocks);
    let mut t = 0.0;
    let mut y = y0;
    let mut out = vec![(t, y.clone())];
    let mut next = next_sample(t, params.sample_stride, horizon);
    while t < horizon {
        if stepper.accepted >= params.max_steps {
            return Err(Error::Flow(format!("max_steps = {} reached at t = {t}", params.max_steps)));
        }
        let step = stepper.advance(&mut f, t, &y, next - t)?;
        t = if next - t <= step.h { next } else { t + step.h };
        y = step.y;
        after_step(&mut y)?;
        if t >= next {
            out.push((t, y.clone()));
            next = next_sample(t, params.sample_stride, horizon);
        }
    }
    Ok(out)
}

/// Co-integrates `v′ = −π(m(v))·v` (raw, never renormalized) and
/// `h′ = −m(v)·h` from `v(0) = ρ(h0)·v̄`, `h(0) = h0`, over `[0, t_max]`.
pub fn coupled_group_flow(
    ctx: &CartanContext,
    spec: &RepSpec,
    vbar: &RepVector,
    h0: &Matrix,
    params: &FlowParams,
) -> Result<Vec<GroupFlowSample>> {
    check_vector(ctx, spec, vbar)?;
    let n = ctx.n();
    if h0.nrows() != n || h0.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h0.nrows(),
        });
    }
    checked_inverse(h0)?;
    let dim = spec.dim();
    let v0 = spec.act_group(h0, vbar.coords())?;
    let field = |_t: f64, y: &Vector| -> Result<Vector> {
        let (v, h) = from_state(y, dim, n);
        let m = moment_of_coords(ctx, spec, &v)?;
        let dv = -spec.act_lie(&m, &v)?;
        let dh = -(&m * &h);
        Ok(to_state(&dv, &dh))
    };
    let trajectory = integrate_fixed(
        to_state(&v0, h0),
        vec![0..dim, dim..dim + n * n],
        params.t_max,
        params,
        field,
        |_| Ok(()),
    )?;
    Ok(trajectory
        .into_iter()
        .map(|(t, y)| {
            let (v, h) = from_state(&y, dim, n);
            GroupFlowSample { t, v, h }
        })
        .collect())
}

/// `S′ = −2·h·m(ρ(h)·v̄)·h` with `h = √S`, which equals `−(MᵀS + SM)` for
/// `M = h⁻¹·m·h`. Positivity is checked after every accepted step.
pub fn metric_flow(
    ctx: &CartanContext,
    spec: &RepSpec,
    vbar: &RepVector,
    s0: &SpdMetric,
    params: &FlowParams,
) -> Result<Vec<(f64, SpdMetric)>> {
    check_vector(ctx, spec, vbar)?;
    let n = ctx.n();
    if s0.matrix().nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: s0.matrix().nrows(),
        });
    }
    let field = |_t: f64, y: &Vector| -> Result<Vector> {
        let s = symmetrize(&Matrix::from_column_slice(n, n, y.as_slice()));
        let h = spd_sqrt(&s).map_err(|e| Error::Flow(format!("metric lost positivity: {e}")))?;
        let w = spec.act_group(&h, vbar.coords())?;
        let m = moment_of_coords(ctx, spec, &w)?;
        let ds = (&h * &m * &h) * -2.0;
        Ok(Vector::from_column_slice(ds.as_slice()))
    };
    let check = |y: &mut Vector| -> Result<()> {
        let s = symmetrize(&Matrix::from_column_slice(n, n, y.as_slice()));
        let (values, _) = sorted_symmetric_eigen(&s);
        if !(values[0] > 0.0) {
            return Err(Error::Flow(format!(
                "metric lost positivity: smallest eigenvalue {:e}",
                values[0]
            )));
        }
        y.copy_from_slice(s.as_slice());
        Ok(())
    };
    let trajectory = integrate_fixed(
        Vector::from_column_slice(s0.matrix().as_slice()),
        vec![],
        params.t_max,
        params,
        field,
        check,
    )?;
    Ok(trajectory
        .into_iter()
        .map(|(t, y)| {
            (
                t,
                SpdMetric {
                    s: Matrix::from_column_slice(n, n, y.as_slice()),
                },
            )
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub max_dev_v: f64,
    pub max_dev_s: f64,
    pub samples: usize,
    pub passed: bool,
}

pub const EQUIVALENCE_TOL: f64 = 1e-6;

/// Runs the raw gradient flow, the coupled group flow and the metric flow
/// from `v0 = ρ(h0)·v̄`, `S0 = h0ᵀh0` over `[0, horizon]` and compares
/// `v(t)` with `ρ(h(t))·v̄` and `S(t)` with `h(t)ᵀh(t)` at every sample.
pub fn verify_flow_equivalence(
    ctx: &CartanContext,
    spec: &RepSpec,
    vbar: &RepVector,
    h0: &Matrix,
    horizon: f64,
    params: &FlowParams,
) -> Result<EquivalenceReport> {
    check_vector(ctx, spec, vbar)?;
    let params = FlowParams {
        t_max: horizon,
        renormalize: false,
        ..params.clone()
    };
    let v0 = spec.act_group(h0, vbar.coords())?;
    let gradient = integrate_fixed(
        v0,
        vec![],
        horizon,
        &params,
        |_t: f64, y: &Vector| gradient_field(ctx, spec, y),
        |_| Ok(()),
    )?;
    let group = coupled_group_flow(ctx, spec, vbar, h0, &params)?;
    let metric = metric_flow(ctx, spec, vbar, &SpdMetric::from_group(h0)?, &params)?;
    if gradient.len() != group.len() || group.len() != metric.len() {
        return Err(Error::Flow("flows produced different sample grids".into()));
    }
    let mut max_dev_v: f64 = 0.0;
    let mut max_dev_s: f64 = 0.0;
    for ((g, c), (tm, s)) in gradient.iter().zip(&group).zip(&metric) {
        if g.0 != c.t || c.t != *tm {
            return Err(Error::Flow("flows produced different sample grids".into()));
        }
        let transported = spec.act_group(&c.h, vbar.coords())?;
        let dv = spec.norm(&(&g.1 - &transported)) / spec.norm(&g.1);
        let hth = c.h.transpose() * &c.h;
        let ds = (s.matrix() - hth).norm() / s.matrix().norm();
        max_dev_v = max_dev_v.max(dv);
        max_dev_s = max_dev_s.max(ds);
    }
    Ok(EquivalenceReport {
        max_dev_v,
        max_dev_s,
        samples: gradient.len(),
        passed: max_dev_v <= EQUIVALENCE_TOL && max_dev_s <= EQUIVALENCE_TOL,
    })
}
