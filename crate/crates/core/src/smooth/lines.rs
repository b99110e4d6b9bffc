//! Projection of grid points onto axis-parallel lines and finite-difference
//! smoothness scans along them.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use crate::grid::GridPoint;
use crate::surrogate::SurrogateModel;

/// Placeholder for the free coordinate inside a line's anchor key.
pub const ANCHOR_FREE: u32 = u32::MAX;

/// Anchor of the line through `point` along `dim`: the point's key with
/// `dim` replaced by [`ANCHOR_FREE`].
pub fn anchor_of(point: &GridPoint, dim: usize) -> Box<[u32]> {
    let mut key: Box<[u32]> = point.key().into();
    key[dim] = ANCHOR_FREE;
    key
}

/// All model points sharing the same coordinates except along `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGroup {
    pub dim: usize,
    pub anchor: Box<[u32]>,
    /// `(coordinate along dim, output)`, strictly ascending in coordinate.
    pub samples: Vec<(f64, f64)>,
}

impl LineGroup {
    pub fn multiplicity(&self) -> usize {
        self.samples.len()
    }
}

/// Partition the model's nodes into lines along `dim`, sorted by anchor.
pub fn group_lines(model: &SurrogateModel, dim: usize) -> Vec<LineGroup> {
    let mut groups: HashMap<Box<[u32]>, Vec<(f64, f64)>> = HashMap::new();
    for node in model.nodes() {
        groups
            .entry(anchor_of(&node.point, dim))
            .or_default()
            .push((node.point.coord(dim), node.output));
    }
    let mut out: Vec<LineGroup> = groups
        .into_iter()
        .map(|(anchor, mut samples)| {
            samples.sort_by(|a, b| a.0.total_cmp(&b.0));
            LineGroup {
                dim,
                anchor,
                samples,
            }
        })
        .collect();
    out.sort_by(|a, b| a.anchor.cmp(&b.anchor));
    out
}

/// Knot ranges of `line` over which slopes change gradually.
///
/// A junction between consecutive secant slopes is a break when the slope
/// change exceeds `phi * max(1, max |output|)`. Maximal runs between breaks
/// with at least four knots are returned; a break knot closes one run and
/// opens the next. Lines shorter than `m_min` yield nothing.
pub fn derivative_scan(line: &LineGroup, m_min: usize, phi: f64) -> Vec<RangeInclusive<usize>> {
    let n = line.samples.len();
    if n < m_min || n < 4 {
        return Vec::new();
    }
    let scale = line
        .samples
        .iter()
        .map(|s| s.1.abs())
        .fold(1.0, f64::max);
    let threshold = phi * scale;
    let slopes: Vec<f64> = line
        .samples
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();

    let mut runs = Vec::new();
    let mut start = 0;
    for k in 0..slopes.len() - 1 {
        let change = (slopes[k + 1] - slopes[k]).abs();
        if !(change <= threshold) {
            if k + 1 - start + 1 >= 4 {
                runs.push(start..=k + 1);
            }
            start = k + 1;
        }
    }
    if n - start >= 4 {
        runs.push(start..=n - 1);
    }
    runs
}
