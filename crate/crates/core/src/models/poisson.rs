//! One-dimensional diffusion problem `-(κ u')' = 2x`, `u(0) = u(1) = 0`,
//! with a log-normal-like random diffusivity expanded in `N` uniform
//! variables.

use serde::{Deserialize, Serialize};

use crate::adapt::Model;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonSpec {
    /// Number of random variables N.
    pub dimension: usize,
    /// Correlation length L_c.
    pub lc: f64,
    pub n_cells: usize,
    /// Where the solution is observed.
    pub x_obs: f64,
    /// Replace the random diffusivity by this constant.
    pub constant_kappa: Option<f64>,
}

impl PoissonSpec {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            lc: 0.5,
            n_cells: 512,
            x_obs: 0.5,
            constant_kappa: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidConfig("Poisson dimension must be >= 1".into()));
        }
        if self.n_cells < 10 {
            return Err(Error::InvalidConfig("Poisson n_cells must be >= 10".into()));
        }
        if !(self.lc > 0.0 && self.lc.is_finite()) {
            return Err(Error::InvalidConfig("correlation length must be positive".into()));
        }
        if !(self.x_obs > 0.0 && self.x_obs < 1.0) {
            return Err(Error::InvalidConfig("x_obs must lie in (0, 1)".into()));
        }
        if let Some(k) = self.constant_kappa {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidConfig("constant kappa must be positive".into()));
            }
        }
        Ok(())
    }

    /// Period length `L_p = max(1, 2 L_c)`.
    pub fn lp(&self) -> f64 {
        f64::max(1.0, 2.0 * self.lc)
    }

    /// Scaled length `L = L_c / L_p`.
    pub fn l(&self) -> f64 {
        self.lc / self.lp()
    }

    /// Amplitude of mode `n ≥ 2`.
    pub fn xi(&self, n: usize) -> f64 {
        let l = self.l();
        let k = (n / 2) as f64;
        (std::f64::consts::PI.sqrt() * l).sqrt() * (-(k * std::f64::consts::PI * l).powi(2) / 8.0).exp()
    }

    /// Spatial shape of mode `n ≥ 2`: sine for even n, cosine for odd n.
    pub fn phi(&self, n: usize, x: f64) -> f64 {
        let arg = (n / 2) as f64 * std::f64::consts::PI * x / self.lp();
        if n.is_multiple_of(2) {
            arg.sin()
        } else {
            arg.cos()
        }
    }

    /// Coefficient of `Y_1`.
    pub fn first_mode(&self) -> f64 {
        (std::f64::consts::PI.sqrt() * self.l() / 2.0).sqrt()
    }

    /// `κ(x) = 0.5 + exp(1 + Y_1 a_1 + Σ_{n≥2} ξ_n φ_n(x) Y_n)`.
    pub fn kappa(&self, x: f64, y: &[f64]) -> f64 {
        if let Some(k) = self.constant_kappa {
            return k;
        }
        let mut exponent = 1.0 + y[0] * self.first_mode();
        for (i, &yn) in y.iter().enumerate().skip(1) {
            let n = i + 1;
            exponent += self.xi(n) * self.phi(n, x) * yn;
        }
        0.5 + exponent.exp()
    }
}

/// Cell-centred finite-volume discretisation with precomputed mode shapes.
#[derive(Debug, Clone)]
pub struct PoissonModel {
    spec: PoissonSpec,
    /// `modes[n - 2][i] = ξ_n φ_n(x_i)` at cell centres.
    modes: Vec<Vec<f64>>,
}

impl PoissonModel {
    pub fn new(spec: PoissonSpec) -> Result<Self> {
        spec.validate()?;
        let h = 1.0 / spec.n_cells as f64;
        let modes = (2..=spec.dimension)
            .map(|n| {
                let xi = spec.xi(n);
                (0..spec.n_cells)
                    .map(|i| xi * spec.phi(n, (i as f64 + 0.5) * h))
                    .collect()
            })
            .collect();
        Ok(Self { spec, modes })
    }

    pub fn spec(&self) -> &PoissonSpec {
        &self.spec
    }

    fn cell_kappa(&self, y: &[f64]) -> Vec<f64> {
        let n = self.spec.n_cells;
        if let Some(k) = self.spec.constant_kappa {
            return vec![k; n];
        }
        let base = 1.0 + y[0] * self.spec.first_mode();
        let mut exponent = vec![base; n];
        for (mode, &yn) in self.modes.iter().zip(&y[1..]) {
            for (e, m) in exponent.iter_mut().zip(mode) {
                *e += m * yn;
            }
        }
        exponent.into_iter().map(|e| 0.5 + e.exp()).collect()
    }

    /// Cell-centre solution values.
    pub fn solve_cells(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.spec.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dimension,
                found: y.len(),
            });
        }
        let n = self.spec.n_cells;
        let h = 1.0 / n as f64;
        let kappa = self.cell_kappa(y);
        if let Some(bad) = kappa.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
            return Err(Error::Evaluation {
                point: y.to_vec(),
                message: format!("non-positive diffusivity {bad}"),
            });
        }
        // face conductances κ_f / Δx; the boundary faces see a half cell
        let mut g = vec![0.0; n + 1];
        g[0] = kappa[0] / (0.5 * h);
        g[n] = kappa[n - 1] / (0.5 * h);
        for i in 1..n {
            let (a, b) = (kappa[i - 1], kappa[i]);
            g[i] = 2.0 * a * b / (a + b) / h;
        }
        let sub: Vec<f64> = (0..n).map(|i| -g[i]).collect();
        let diag: Vec<f64> = (0..n).map(|i| g[i] + g[i + 1]).collect();
        let sup: Vec<f64> = (0..n).map(|i| -g[i + 1]).collect();
        let rhs: Vec<f64> = (0..n).map(|i| 2.0 * (i as f64 + 0.5) * h * h).collect();
        crate::smooth::spline::solve_tridiagonal(&sub, &diag, &sup, &rhs)
    }

    /// Solution at the observation point.
    pub fn solve(&self, y: &[f64]) -> Result<f64> {
        let u = self.solve_cells(y)?;
        Ok(sample_cells(&u, self.spec.x_obs))
    }
}

/// Piecewise-linear reconstruction through the cell centres and the zero
/// boundary values.
fn sample_cells(u: &[f64], x: f64) -> f64 {
    let n = u.len();
    let h = 1.0 / n as f64;
    let s = x / h - 0.5;
    if s <= 0.0 {
        return u[0] * (x / (0.5 * h));
    }
    if s >= (n - 1) as f64 {
        return u[n - 1] * ((1.0 - x) / (0.5 * h));
    }
    let i = s.floor() as usize;
    let t = s - i as f64;
    u[i] * (1.0 - t) + u[i + 1] * t
}

impl Model for PoissonModel {
    fn dimension(&self) -> usize {
        self.spec.dimension
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.solve(x)
    }
}
