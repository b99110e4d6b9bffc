//! Cubic interpolating spline with not-a-knot end conditions.

use crate::error::{Error, Result};

/// Piecewise cubic through `(x, y)` with continuous second derivatives,
/// and third-derivative continuity at the second and second-to-last knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivative at each knot.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn not_a_knot(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::Spline(format!(
                "{} knots but {} values",
                n,
                y.len()
            )));
        }
        if n < 4 {
            return Err(Error::Spline(format!("need at least 4 knots, got {n}")));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::Spline("non-finite knot data".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Spline("knots must be strictly increasing".into()));
        }

        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

        // Tridiagonal system in the interior second derivatives M_1..M_{n-2};
        // the end values are eliminated with the not-a-knot relations
        //   M_0     = M_1 (1 + h0/h1) - M_2 h0/h1
        //   M_{n-1} = M_{n-2} (1 + a) - M_{n-3} a,   a = h_{n-2}/h_{n-3}
        let k = n - 2;
        let mut sub = vec![0.0; k];
        let mut diag = vec![0.0; k];
        let mut sup = vec![0.0; k];
        let mut rhs = vec![0.0; k];
        for r in 0..k {
            let i = r + 1;
            sub[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i];
            rhs[r] = 6.0 * (slope[i] - slope[i - 1]);
        }
        let (h0, h1) = (h[0], h[1]);
        diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
        sup[0] = (h1 * h1 - h0 * h0) / h1;
        let (ha, hb) = (h[n - 3], h[n - 2]);
        sub[k - 1] = (ha * ha - hb * hb) / ha;
        diag[k - 1] = (hb + ha) * (hb + 2.0 * ha) / ha;

        let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
        let mut m = Vec::with_capacity(n);
        m.push(interior[0] * (1.0 + h0 / h1) - interior[1] * h0 / h1);
        m.extend_from_slice(&interior);
        let a = hb / ha;
        m.push(interior[k - 1] * (1.0 + a) - interior[k - 2] * a);

        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn lower(&self) -> f64 {
        self.x[0]
    }

    pub fn upper(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// Spline value at `t`; no extrapolation outside the knot span.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = (self.lower(), self.upper());
        if !(t >= lo && t <= hi) {
            return Err(Error::OutsideInterval { t, lo, hi });
        }
        let seg = self
            .x
            .partition_point(|&xk| xk <= t)
            .saturating_sub(1)
            .min(self.x.len() - 2);
        let (x0, x1) = (self.x[seg], self.x[seg + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - t, t - x0);
        let (m0, m1) = (self.m[seg], self.m[seg + 1]);
        Ok(m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (self.y[seg] / h - m0 * h / 6.0) * a
            + (self.y[seg + 1] / h - m1 * h / 6.0) * b)
    }
}

/// Thomas algorithm. The systems built here are strictly diagonally dominant.
pub(crate) fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::SingularSystem("zero pivot in tridiagonal solve".into()));
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot == 0.0 {
            return Err(Error::SingularSystem("zero pivot in tridiagonal solve".into()));
        }
        c[i] = sup[i] / pivot;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reproduces_knots() {
        let x = [0.0, 0.1, 0.35, 0.5, 0.8, 1.0];
        let y = [1.0, -2.0, 0.5, 3.0, 2.5, 0.0];
        let s = CubicSpline::not_a_knot(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((s.eval(*xi).unwrap() - yi).abs() <= 4.0 * f64::EPSILON * yi.abs().max(1.0));
        }
    }

    #[test]
    fn reproduces_cubics_on_nonuniform_knots() {
        let f = |t: f64| 2.0 * t * t * t - t * t + 0.5 * t - 3.0;
        for x in [
            vec![0.0, 0.25, 0.5, 1.0],
            vec![0.0, 0.125, 0.25, 0.375, 0.5, 0.75, 1.0],
            vec![0.25, 0.3125, 0.375, 0.5, 0.625],
        ] {
            let y: Vec<f64> = x.iter().map(|&t| f(t)).collect();
            let s = CubicSpline::not_a_knot(&x, &y).unwrap();
            for i in 0..=200 {
                let t = x[0] + (x[x.len() - 1] - x[0]) * i as f64 / 200.0;
                assert!((s.eval(t).unwrap() - f(t)).abs() < 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn sine_error_on_uniform_knots() {
        let x: Vec<f64> = (0..9).map(|i| i as f64 / 8.0).collect();
        let y: Vec<f64> = x.iter().map(|&t| (2.0 * PI * t).sin()).collect();
        let s = CubicSpline::not_a_knot(&x, &y).unwrap();
        let clamped_bound = 5.0 / 384.0 * (2.0 * PI).powi(4) * (1.0f64 / 8.0).powi(4);
        let err = |lo: f64, hi: f64| {
            (0..=10_000)
                .map(|i| i as f64 / 10_000.0)
                .filter(|&t| t >= lo && t <= hi)
                .map(|t| (s.eval(t).unwrap() - (2.0 * PI * t).sin()).abs())
                .fold(0.0, f64::max)
        };
        // reference value from an independent not-a-knot implementation
        assert!((err(0.0, 1.0) - 7.748833747e-3).abs() < 1e-11);
        // away from the end intervals the clamped-spline bound holds
        assert!(err(0.125, 0.875) <= clamped_bound);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CubicSpline::not_a_knot(&[0.0, 1.0, 2.0], &[0.0; 3]).is_err());
        assert!(CubicSpline::not_a_knot(&[0.0, 1.0, 1.0, 2.0], &[0.0; 4]).is_err());
        assert!(CubicSpline::not_a_knot(&[0.0, 1.0, 2.0, 3.0], &[0.0; 3]).is_err());
        let s = CubicSpline::not_a_knot(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 8.0, 27.0]).unwrap();
        assert!(matches!(s.eval(3.5), Err(Error::OutsideInterval { .. })));
        assert!(s.eval(-0.1).is_err());
    }
}
