//! Monte Carlo runs under the scalings of the limit theorems, KS distances
//! and comparison reports.
//!
//! A [`ScalingSpec`] names a regime and its parameters. [`run_mc`] samples
//! the raw observable, [`ks_distance`] compares the scaled sample with a
//! limiting law and [`compare_report`] bundles everything into a record
//! that serialises to JSON.

mod mc;
mod report;
mod scaling;

pub use mc::{draw_raw, ks_distance, ks_sorted, run_mc, EcdfSummary, MIN_SAMPLES};
pub use report::{compare_report, CompareReport, ExactComparison, TargetSummary};
pub use scaling::{lpp_scaling_params, AffineMap, LppScaling, Model, Regime, Resolved, ScalingSpec};
