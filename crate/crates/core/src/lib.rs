//! Planar curves under the TreadmillSled and Roll operators, and the profile
//! curves of helicoidal surfaces built from them.
//!
//! The TreadmillSled of a regular curve `α` is the trace of the origin under
//! the rigid motions that carry `α(t)` to the origin with tangent along the
//! positive x-axis. Its inverse recovers `α` up to rotation, which makes it
//! possible to prescribe the shape of the TreadmillSled and read off the
//! profile curve. Minimal, CMC-one and flat helicoidal surfaces have simple
//! TreadmillSleds; see [`generators`].

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod diff;
pub mod error;
pub mod generators;
pub mod geom;
pub mod helicoidal;
pub mod inverse;
pub mod io;
pub mod ode;
pub mod roll;
pub mod sources;
pub mod treadmill;

pub use curve::{arclength_reparametrize, curvature, reverse, rotate, sample, turning_angle, CurveSource, SampledCurve};
pub use error::{GeomError, Result};
pub use geom::{Mat2, Vec2, Vec3};
pub use helicoidal::HelicoidalParams;
pub use inverse::{check_range, companion_f, invert, InverseResult};
pub use roll::{roll, RollTrace};
pub use treadmill::{phi_ts, treadmill_program, ts, TSCurve};
