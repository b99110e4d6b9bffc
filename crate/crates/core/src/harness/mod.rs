//! Error metrics, reference moments, studies, configuration and storage.

pub mod config;
pub mod mc;
pub mod metrics;
pub mod persist;
pub mod study;

pub use config::RunConfig;
pub use mc::{mc_reference, McEstimate};
pub use metrics::{errors, max_abs_error, rmse, ErrorMetrics, TestSet};
pub use study::{run_study, Metric, StudyReport, StudyRow};
