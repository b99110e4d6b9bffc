//! Analytic mean and variance of a surrogate over the uniform unit cube.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridPoint;
use crate::surrogate::SurrogateModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_square: f64,
    pub variance: f64,
}

impl MomentEstimate {
    /// Assemble from the first two raw moments. Negative variance within
    /// `1e-12 * max(|mean_square|, mean²)` is clamped to zero; anything
    /// below is an error.
    pub fn from_raw(mean: f64, mean_square: f64) -> Result<Self> {
        Self::with_scale(mean, mean_square, mean_square.abs().max(mean * mean))
    }

    /// As [`from_raw`](Self::from_raw) with the rounding scale given
    /// explicitly, for moments accumulated from terms of larger magnitude.
    pub fn with_scale(mean: f64, mean_square: f64, scale: f64) -> Result<Self> {
        let mut variance = mean_square - mean * mean;
        let tolerance = 1e-12 * scale;
        if variance < 0.0 {
            if variance < -tolerance {
                return Err(Error::NegativeVariance {
                    variance,
                    tolerance,
                });
            }
            variance = 0.0;
        }
        Ok(Self {
            mean,
            mean_square,
            variance,
        })
    }
}

/// Integral over `[0, 1]` of a one-dimensional basis function of `level`.
pub fn weight_1d(level: u32) -> Result<f64> {
    match level {
        0 => Err(Error::InvalidNode { level, index: 0 }),
        1 => Ok(1.0),
        2 => Ok(0.25),
        l => Ok(f64::powi(2.0, 1 - l as i32)),
    }
}

/// Integral over the unit cube of the point's tensor-product basis.
pub fn weight_nd(point: &GridPoint) -> f64 {
    point
        .nodes()
        .map(|n| weight_1d(n.level()).expect("grid nodes have level >= 1"))
        .product()
}

pub fn moments(model: &SurrogateModel) -> Result<MomentEstimate> {
    if model.is_empty() {
        return Err(Error::EmptyModel);
    }
    let (mut mean, mut mean_square, mut abs_w, mut abs_v) = (0.0, 0.0, 0.0f64, 0.0f64);
    for node in model.nodes() {
        let l = weight_nd(&node.point);
        mean += node.w * l;
        mean_square += node.v * l;
        abs_w += (node.w * l).abs();
        abs_v += (node.v * l).abs();
    }
    MomentEstimate::with_scale(mean, mean_square, abs_v.max(abs_w * abs_w))
}
