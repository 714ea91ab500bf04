//! Classical RK4 with step-doubling error control.
//!
//! A step of size `h` is compared against two steps of size `h/2`; the pair is
//! accepted when, on every block of the state, the difference is at most
//! `tol` times the block norm. Rejection halves the step, ten consecutive
//! acceptances grow it by 1.5.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct StepControl {
    pub tol: f64,
    pub min_dt: f64,
    pub grow: f64,
    pub grow_after: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            tol: 1e-10,
            min_dt: 1e-14,
            grow: 1.5,
            grow_after: 10,
        }
    }
}

/// One classical Runge-Kutta step.
pub fn rk4_step<F>(f: &mut F, t: f64, y: &Vector, h: f64) -> Result<Vector>
where
    F: FnMut(f64, &Vector) -> Result<Vector>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &(y + &k1 * (0.5 * h)))?;
    let k3 = f(t + 0.5 * h, &(y + &k2 * (0.5 * h)))?;
    let k4 = f(t + h, &(y + &k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

#[derive(Clone, Debug)]
pub struct Stepper {
    control: StepControl,
    blocks: Vec<Range<usize>>,
    dt: f64,
    streak: usize,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug)]
pub struct Step {
    pub y: Vector,
    pub h: f64,
    pub error: f64,
}

impl Stepper {
    /// `blocks` partition the state for the relative error test; empty means one block.
    pub fn new(dt0: f64, control: StepControl, blocks: Vec<Range<usize>>) -> Self {
        Stepper {
            control,
            blocks,
            dt: dt0,
            streak: 0,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn relative_error(&self, coarse: &Vector, fine: &Vector) -> f64 {
        let block_error = |r: Range<usize>| {
            let diff = (coarse.rows_range(r.clone()) - fine.rows_range(r.clone())).norm();
            let scale = fine.rows_range(r).norm();
            if diff == 0.0 {
                0.0
            } else {
                diff / scale.max(f64::MIN_POSITIVE)
            }
        };
        if self.blocks.is_empty() {
            block_error(0..fine.len())
        } else {
            self.blocks
                .iter()
                .cloned()
                .map(block_error)
                .fold(0.0, f64::max)
        }
    }

    /// Advances from `t` by at most `max_h`, retrying with smaller steps until
    /// the error test passes. A step clipped by `max_h` does not shrink the
    /// nominal step size.
    pub fn advance<F>(&mut self, f: &mut F, t: f64, y: &Vector, max_h: f64) -> Result<Step>
    where
        F: FnMut(f64, &Vector) -> Result<Vector>,
    {
        loop {
            let clipped = self.dt >= max_h;
            let h = if clipped { max_h } else { self.dt };
            if h < self.control.min_dt && !clipped {
                return Err(Error::Flow(format!(
                    "step size underflow at t = {t}: dt = {h:e}"
                )));
            }
            let coarse = rk4_step(f, t, y, h)?;
            let half = rk4_step(f, t, y, 0.5 * h)?;
            let fine = rk4_step(f, t + 0.5 * h, &half, 0.5 * h)?;
            let error = self.relative_error(&coarse, &fine);
            if error.is_finite() && error <= self.control.tol {
                self.accepted += 1;
                self.streak += 1;
                if self.streak >= self.control.grow_after {
                    self.dt *= self.control.grow;
                    self.streak = 0;
                }
                return Ok(Step { y: fine, h, error });
            }
            self.rejected += 1;
            self.streak = 0;
            self.dt = 0.5 * h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let mut f = |_t: f64, y: &Vector| -> Result<Vector> { Ok(-y) };
        let mut stepper = Stepper::new(1e-2, StepControl::default(), vec![]);
        let mut y = Vector::from_vec(vec![1.0, 2.0]);
        let mut t = 0.0;
        while t < 3.0 {
            let step = stepper.advance(&mut f, t, &y, 3.0 - t).unwrap();
            t += step.h;
            y = step.y;
        }
        assert_eq!(t, 3.0);
        let exact = (-3.0f64).exp();
        assert!((y[0] - exact).abs() / exact < 1e-9);
        assert!((y[1] - 2.0 * exact).abs() / exact < 1e-9);
        assert!(stepper.dt() > 1e-2);
    }

    #[test]
    fn rotation_keeps_norm() {
        let mut f = |_t: f64, y: &Vector| -> Result<Vector> {
            Ok(Vector::from_vec(vec![-y[1], y[0]]))
        };
        let mut stepper = Stepper::new(0.1, StepControl::default(), vec![0..2]);
        let mut y = Vector::from_vec(vec![1.0, 0.0]);
        let mut t = 0.0;
        let end = std::f64::consts::PI;
        while t < end {
            let step = stepper.advance(&mut f, t, &y, end - t).unwrap();
            t += step.h;
            y = step.y;
        }
        assert!((y[0] + 1.0).abs() < 1e-8 && y[1].abs() < 1e-8);
    }

    #[test]
    fn blow_up_underflows() {
        let mut f = |_t: f64, y: &Vector| -> Result<Vector> { Ok(y.map(|x| x * x)) };
        let mut stepper = Stepper::new(0.1, StepControl::default(), vec![]);
        let mut y = Vector::from_vec(vec![1.0]);
        let mut t = 0.0;
        let outcome = loop {
            match stepper.advance(&mut f, t, &y, 10.0) {
                Ok(step) => {
                    t += step.h;
                    y = step.y;
                }
                Err(e) => break e,
            }
        };
        assert!(matches!(outcome, Error::Flow(_)));
        // the pole is at t = 1; accumulated error may place t a hair beyond it
        assert!(t < 1.0 + 1e-6, "t = {t}");
    }
}
