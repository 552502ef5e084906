//! Tail-index estimation for Pareto-type distributions.
//!
//! The crate implements the Hill and bias-corrected Hill estimators together
//! with a family of (penalised, weighted) least-squares fits of the
//! exponential regression model for scaled log-spacings of the top order
//! statistics, a Monte Carlo harness for bias/MSE studies, and claims-data
//! helpers (CSV ingestion, Q-Q plot coordinates).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod claims;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod rng;
pub mod second_order;
pub mod simstudy;
pub mod spacings;
pub mod stats;

pub use distributions::ParetoTypeDist;
pub use error::{Error, Result};
pub use estimators::{
    estimate, hill, tail_path, EstimatorKind, EstimatorResult, EstimatorTag, PenaltyMode, RegressionOptions, TailPath,
    WeightScheme,
};
pub use second_order::{estimate_second_order, SecondOrderConfig, SecondOrderParams};
pub use spacings::{AlphaSchedule, SortedSample, SpacingSet};
