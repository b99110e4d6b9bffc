//! Sparse grid collocation surrogates on the unit cube: conventional,
//! surplus-adaptive, and adaptive with cubic-spline substitution along
//! smooth one-dimensional segments.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adapt;
pub mod error;
pub mod grid;
pub mod harness;
pub mod models;
pub mod moments;
pub mod surrogate;
pub mod smooth;

pub use adapt::{
    refine_candidates, run_asgc, run_csc, AdaptiveConfig, BuildOutput, FnModel, LevelRecord,
    Method, Model, ModelFunction, SparseGridBuilder, Termination,
};
pub use error::{Error, Result};
pub use harness::{run_study, RunConfig, StudyReport, TestSet};
pub use grid::{GridPoint, NodeIndex1D};
pub use models::{benchmark, Benchmark};
pub use moments::{moments, MomentEstimate};
pub use smooth::{run_easgc, CubicSpline, RegionDatabase, SmoothRegion};
pub use surrogate::{EvalCounts, HierarchicalNode, Provenance, SurrogateModel};
