//! Experiments on the counting function: depth sweeps with a log-slope fit,
//! aperture monotonicity, positivity of the higher fibers and the
//! lower/upper bracketing at a single depth.

pub mod bracketing;
pub mod fit;
pub mod monotone;
pub mod positivity;
pub mod report;
pub mod sweep;

pub use bracketing::{bracketing_check, BracketingReport};
pub use fit::{fit_log_slope, linear_fit, log_spaced, LinearFit};
pub use monotone::{monotonicity_sweep, MonotonicityTable};
pub use positivity::{positivity_check, FiberPositivity, PositivityReport};
pub use report::{write_curve_csv, SweepSummary};
pub use sweep::{
    counting_sweep, fiber_count, finish_curve, CountingCurve, CurveSample, FiberCount, SpacingRule, SweepPolicy,
    ThresholdReference,
};
