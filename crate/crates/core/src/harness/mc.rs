//! Plain Monte Carlo moments, used as a reference for surrogate moments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::Model;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub samples: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub mean_std_error: f64,
    pub variance_std_error: f64,
}

/// Sample `n` points uniformly with a seeded ChaCha8 stream. Points are
/// drawn sequentially, then evaluated in parallel.
pub fn mc_reference(model: &dyn Model, n: usize, seed: u64) -> Result<McEstimate> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "Monte Carlo reference needs at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let d = model.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
    let values: Vec<f64> = points
        .par_chunks(d)
        .map(|p| model.evaluate(p))
        .collect::<Result<_>>()?;

    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (m2, m4) = values.iter().fold((0.0, 0.0), |(m2, m4), v| {
        let c = v - mean;
        (m2 + c * c, m4 + c * c * c * c)
    });
    let variance = m2 / (nf - 1.0);
    let central4 = m4 / nf;
    let biased = m2 / nf;
    Ok(McEstimate {
        samples: n,
        mean,
        variance,
        mean_std_error: (variance / nf).sqrt(),
        variance_std_error: ((central4 - biased * biased).max(0.0) / nf).sqrt(),
    })
}
