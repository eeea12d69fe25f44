// NaN-rejecting guards are written as `!(x > 0.0)`; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod cli;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod fibers;
pub mod model1d;

pub use error::{Error, Result};
