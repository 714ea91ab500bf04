//! Moment maps, energy flows and exact instability strata for representations
//! of `GL_n(ℝ)` and `SL_n(ℝ)`.
//!
//! The numerical side ([`moment`], [`flows`]) works with `f64` and `nalgebra`;
//! the combinatorial side ([`hesselink`], [`catalog`]) is exact over `ℚ`.
//! The two meet in [`hesselink::kn_label_via_flow`], which checks that the
//! gradient-flow limit spectrum equals the exact label.

pub mod cartan;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod flows;
pub mod hesselink;
pub mod integrator;
pub mod io;
pub mod linalg;
pub mod moment;
pub mod rational;
pub mod reps;

pub use cartan::{build_context, spd_sqrt, CartanContext, GroupKind};
pub use catalog::{BracketTensor, Partition};
pub use error::{Error, Result};
pub use flows::{gradient_flow, FlowParams, FlowResult, SpdMetric};
pub use hesselink::{min_norm_point, optimal_class, HesselinkLabel, MinNormCertificate, OptimalClass};
pub use linalg::{Matrix, Vector};
pub use moment::{moment, MomentValue};
pub use rational::{Rational, RationalVector};
pub use reps::{Family, RepSpec, RepVector, WeightVector};
