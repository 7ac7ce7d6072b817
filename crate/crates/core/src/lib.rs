//! Randers rotational metrics on spheres of revolution via Zermelo navigation:
//! geodesics, half-period functions, conjugate points and cut loci, with a
//! mesh distance oracle to check them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conjcut;
pub mod error;
pub mod geodesics;
pub mod halfperiod;
pub mod io;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod spline;
pub mod surfaces;
pub mod verify;

pub use error::{Error, Result};
pub use surfaces::{
    Direction, MetricCoefficients, NavigationData, ProfileFamily, ProfileSpec, ProfileValue,
};
