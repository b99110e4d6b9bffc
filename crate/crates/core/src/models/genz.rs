//! Genz test families on `[0, 1]^d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenzParams {
    pub w1: f64,
    pub w2: f64,
    pub c: Vec<f64>,
}

impl GenzParams {
    /// `c_i ∝ 1/(i+1)` for i = 1..d, scaled so that `Σ c_i = total`.
    pub fn with_total(dimension: usize, total: f64) -> Self {
        let raw: Vec<f64> = (1..=dimension).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let sum: f64 = raw.iter().sum();
        Self {
            w1: 0.5,
            w2: 0.5,
            c: raw.into_iter().map(|r| r * total / sum).collect(),
        }
    }

    pub fn oscillatory_default(dimension: usize) -> Self {
        Self::with_total(dimension, 5.0)
    }

    pub fn corner_peak_default(dimension: usize) -> Self {
        Self::with_total(dimension, 2.0)
    }

    pub fn discontinuous_default(dimension: usize) -> Self {
        Self::with_total(dimension, 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c.is_empty() || self.c.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidConfig(
                "Genz coefficients must be positive and finite".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.w1) || !(0.0..=1.0).contains(&self.w2) {
            return Err(Error::InvalidConfig("Genz w1, w2 must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn weighted_sum(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }
}

/// `cos(2π w1 + Σ c_i x_i)`.
pub fn oscillatory(x: &[f64], p: &GenzParams) -> f64 {
    (2.0 * std::f64::consts::PI * p.w1 + p.weighted_sum(x)).cos()
}

/// `(1 + Σ c_i x_i)^-6`.
pub fn corner_peak(x: &[f64], p: &GenzParams) -> f64 {
    (1.0 + p.weighted_sum(x)).powi(-6)
}

/// `0` if `x1 ≥ w1` or `x2 ≥ w2`, else `exp(Σ c_i x_i)`.
pub fn discontinuous(x: &[f64], p: &GenzParams) -> f64 {
    if x[0] >= p.w1 || x.get(1).is_some_and(|&x2| x2 >= p.w2) {
        0.0
    } else {
        p.weighted_sum(x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(w1: f64, c: f64) -> GenzParams {
        GenzParams {
            w1,
            w2: 0.5,
            c: vec![c; 5],
        }
    }

    #[test]
    fn defaults_are_normalised() {
        for (p, total) in [
            (GenzParams::oscillatory_default(5), 5.0),
            (GenzParams::corner_peak_default(5), 2.0),
            (GenzParams::discontinuous_default(5), 4.0),
        ] {
            assert!((p.c.iter().sum::<f64>() - total).abs() < 1e-12);
            assert!(p.c.windows(2).all(|w| w[0] > w[1]));
            p.validate().unwrap();
        }
    }

    #[test]
    fn oscillatory_values() {
        assert_eq!(oscillatory(&[0.3; 5], &params(0.0, 0.0)), 1.0);
        assert!(oscillatory(&[0.3; 5], &params(0.25, 0.0)).abs() < 1e-15);
        let p = GenzParams::oscillatory_default(5);
        let expect = (2.0 * std::f64::consts::PI * 0.5 + 0.5 * 5.0).cos();
        assert!((oscillatory(&[0.5; 5], &p) - expect).abs() < 1e-14);
    }

    #[test]
    fn corner_peak_values() {
        assert_eq!(corner_peak(&[0.0; 5], &params(0.5, 1.0)), 1.0);
        assert!((corner_peak(&[1.0; 5], &params(0.5, 1.0)) - 6f64.powi(-6)).abs() < 1e-18);
        let p = GenzParams::corner_peak_default(5);
        let mut x = [0.3; 5];
        let base = corner_peak(&x, &p);
        x[2] = 0.4;
        assert!(corner_peak(&x, &p) < base);
    }

    #[test]
    fn discontinuous_values() {
        let p = params(0.5, 1.0);
        assert_eq!(discontinuous(&[0.5, 0.1, 0.0, 0.0, 0.0], &p), 0.0);
        assert_eq!(discontinuous(&[0.1, 0.5, 0.0, 0.0, 0.0], &p), 0.0);
        assert_eq!(discontinuous(&[0.0; 5], &p), 1.0);
        let v = discontinuous(&[0.4, 0.4, 1.0, 1.0, 1.0], &p);
        assert!((v - 3.8f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_coefficients() {
        assert!(params(0.5, 0.0).validate().is_err());
        assert!(params(1.5, 1.0).validate().is_err());
    }
}
