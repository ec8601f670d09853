//! Kernelised Stein discrepancy tests for random graph models.
//!
//! gKSS tests a network against an exponential random graph model using
//! its exact conditional edge probabilities. AgraSSt does the same for a
//! black-box generator, estimating those probabilities from generator
//! samples. Both statistics are RKHS norms built from a graph kernel; the
//! [`kernels`] module provides the kernels, [`stein`] the statistics and
//! [`mctest`] the Monte Carlo test around them.

pub mod ergm;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod kernels;
pub mod linalg;
pub mod mctest;
pub mod stein;

pub use ergm::{ErgmModel, ErgmTerm};
pub use error::{Error, Result};
pub use generators::{GeneratorSpec, SampleDirectory, Topology};
pub use graph::{Graph, PairIndex, StatValue, SummaryStatisticKind};
pub use kernels::KernelSpec;
pub use mctest::{rejection_rate, run_test, NullModel, TestConfig, TestOutcome};
pub use stein::{
    agrasst_squared, kss_squared, ConditionalEstimator, PairSelection, ScoreSource, SteinConvention,
};
