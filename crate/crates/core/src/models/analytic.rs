//! Closed-form test functions on the unit square and interval.

/// `1 / (|0.3 - x² - y²| + 0.1)`: smooth except along the arc x² + y² = 0.3.
pub fn line_singularity(x: f64, y: f64) -> f64 {
    1.0 / ((0.3 - x * x - y * y).abs() + 0.1)
}

/// `|x - at|`, a single kink.
pub fn kink(x: f64, at: f64) -> f64 {
    (x - at).abs()
}

/// `Π sin(π x_i)`.
pub fn sine_product(x: &[f64]) -> f64 {
    x.iter().map(|&t| (std::f64::consts::PI * t).sin()).product()
}
