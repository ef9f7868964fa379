//! Measurements on simulated fronts and kernels.

mod front;
mod green;
mod harness;
mod ic;

pub use front::{
    estimate_decay_rate, estimate_speed, estimate_speed_from_snapshots, front_position,
    monotonicity_violation, shift_matched_residual, translate_cells, ConvergenceReport,
    SpeedEstimate, DECAY_FIT_BAND, DECAY_MIN_R2,
};
pub use green::{
    auto_resolution, green_function, green_function_auto, GreenFunction, BOUNDARY_DENSITY_RATIO,
};
pub use harness::{
    bounds_check, comparison_test, random_ordered_pair, BoundsReport, ComparisonOutcome,
    BOUNDS_TOLERANCE, ORDER_TOLERANCE,
};
pub use ic::{make_ic, InitialCondition};
