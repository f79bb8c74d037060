//! Empirical checks of the contraction, jump, quadratic-growth, little
//! Julia set and cascade statements, plus corpus-level rank statistics.

mod cascade;
mod contraction;
mod dichotomy;
mod julia;
mod quad;
mod trend;

pub use cascade::{parabolic_proximity, track_cascade, CascadeOutcome, CascadeTrial};
pub use contraction::{
    run_contraction_trial, ContractionReport, JumpTrace, Moment, Outcome, ReturnClass, TraceStep,
};
pub use dichotomy::{jump_dichotomy_check, monotone_pullback, Dichotomy};
pub use julia::{sample_little_julia, JuliaSample};
pub use quad::{in_level_domain, quad_estimate, quad_ratio_min};
pub use trend::{spearman, trend_sigma_vs_pe, TrendReport};

/// Default jump angle, radians.
pub const DEFAULT_EPS: f64 = 0.05;
/// Default commensurability quantifier for good moments.
pub const DEFAULT_KBAR: f64 = 64.0;
