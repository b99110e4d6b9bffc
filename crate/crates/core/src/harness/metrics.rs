//! Error of a surrogate against its model on a fixed test set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::Model;
use crate::error::{Error, Result};
use crate::surrogate::SurrogateModel;

/// Test points with reference model outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl TestSet {
    /// `n` points drawn uniformly from the unit cube with a seeded ChaCha8
    /// stream. Reference values bypass any evaluation counter.
    pub fn uniform(model: &dyn Model, n: usize, seed: u64) -> Result<Self> {
        let d = model.dimension();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
            .collect();
        Self::at(model, points)
    }

    /// Tensor grid of cell midpoints, `per_axis` along each axis.
    pub fn grid(model: &dyn Model, per_axis: usize) -> Result<Self> {
        let d = model.dimension();
        let total = per_axis
            .checked_pow(d as u32)
            .ok_or_else(|| Error::InvalidConfig("test grid too large".into()))?;
        let points = (0..total)
            .map(|mut k| {
                (0..d)
                    .map(|_| {
                        let i = k % per_axis;
                        k /= per_axis;
                        (i as f64 + 0.5) / per_axis as f64
                    })
                    .collect()
            })
            .collect();
        Self::at(model, points)
    }

    pub fn at(model: &dyn Model, points: Vec<Vec<f64>>) -> Result<Self> {
        let values = points
            .par_iter()
            .map(|p| model.evaluate(p))
            .collect::<Result<_>>()?;
        Ok(Self { points, values })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub max_abs_error: f64,
    pub rmse: f64,
}

pub fn errors(model: &SurrogateModel, set: &TestSet) -> Result<ErrorMetrics> {
    if set.is_empty() {
        return Err(Error::InvalidConfig("empty test set".into()));
    }
    let diffs: Vec<f64> = set
        .points
        .par_iter()
        .zip(&set.values)
        .map(|(p, v)| Ok(model.interpolate(p)? - v))
        .collect::<Result<_>>()?;
    let max_abs_error = diffs.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let rmse = (diffs.iter().map(|d| d * d).sum::<f64>() / diffs.len() as f64).sqrt();
    Ok(ErrorMetrics {
        max_abs_error,
        rmse,
    })
}

pub fn max_abs_error(model: &SurrogateModel, set: &TestSet) -> Result<f64> {
    Ok(errors(model, set)?.max_abs_error)
}

pub fn rmse(model: &SurrogateModel, set: &TestSet) -> Result<f64> {
    Ok(errors(model, set)?.rmse)
}
