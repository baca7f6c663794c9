//! Optimal single-mode probes under loss, the TMSV comparison and grid sweeps.

mod grid;
mod optimize;

pub use grid::{run_sweep, Axis, SweepRecord, SweepSpec, FLAG_FULLY_LOSSY, FLAG_MIXED_BEATS_PURE};
pub use optimize::{
    optimize_displacement_ratio, optimize_displacement_ratio_with, ratio_probe, ratio_transition_width,
    relative_increase, relative_increase_with, theta_band, ComparisonMode, Increase, RatioOptimum, ThetaBand,
    BAND_NODES, RATIO_TOL, SCAN_POINTS,
};
