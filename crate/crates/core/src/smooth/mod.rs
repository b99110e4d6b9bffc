//! Spline substitution along one-dimensional smooth segments.
//!
//! After every adaptive level the model's points are grouped into
//! axis-parallel lines. Lines with enough points are scanned for abrupt
//! slope changes, and the segments between them are stored with a cubic
//! spline. Later candidates that fall on a stored segment take the spline
//! value instead of a full model evaluation.

pub mod lines;
pub mod regions;
pub mod spline;

pub use lines::{derivative_scan, group_lines, LineGroup};
pub use regions::{RegionDatabase, SmoothRegion, StoreOutcome};
pub use spline::CubicSpline;

use crate::adapt::{AdaptiveConfig, BuildOutput, Method, ModelFunction, SparseGridBuilder};
use crate::error::{Error, Result};

/// Surplus-adaptive sparse grid with spline substitution.
pub fn run_easgc(f: &ModelFunction, cfg: AdaptiveConfig) -> Result<BuildOutput> {
    if !cfg.spline {
        return Err(Error::InvalidConfig(
            "spline substitution is off; use the plain adaptive method".into(),
        ));
    }
    SparseGridBuilder::new(f, Method::Easgc, cfg)?.run()
}
