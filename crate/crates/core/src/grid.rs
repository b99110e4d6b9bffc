//! Nested equidistant node hierarchy on `[0, 1]` and its tensor-product
//! extension.
//!
//! One-dimensional nodes are born at exactly one level:
//!
//! ```text
//! level 1: 0.5
//! level 2: 0, 1
//! level i >= 3: (2j + 1) / 2^(i-1),   j = 0 .. 2^(i-2) - 1
//! ```
//!
//! Every coordinate is stored as an exact fixed-point dyadic rational
//! (numerator over `2^30`), which doubles as the canonical identity of the
//! node. Deduplication of grid points therefore never compares floats.

use crate::error::{Error, Result};

/// Deepest supported one-dimensional level.
pub const MAX_LEVEL: u32 = 31;

const FRACTION_BITS: u32 = 30;
const SCALE: f64 = (1u64 << FRACTION_BITS) as f64;
pub(crate) const DYADIC_HALF: u32 = 1 << (FRACTION_BITS - 1);
pub(crate) const DYADIC_ONE: u32 = 1 << FRACTION_BITS;

/// A node of the one-dimensional hierarchy, identified by its birth level and
/// its position among the nodes new at that level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIndex1D {
    level: u32,
    index: u32,
}

impl NodeIndex1D {
    pub fn new(level: u32, index: u32) -> Result<Self> {
        let valid = match level {
            1 => index == 0,
            2 => index <= 1,
            3..=MAX_LEVEL => index < (1u32 << (level - 2)),
            _ => false,
        };
        if valid {
            Ok(Self { level, index })
        } else {
            Err(Error::InvalidNode { level, index })
        }
    }

    /// The single level-1 node at 0.5.
    pub const fn root() -> Self {
        Self { level: 1, index: 0 }
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn index(self) -> u32 {
        self.index
    }

    /// Number of nodes new at `level`.
    pub fn new_at_level(level: u32) -> usize {
        match level {
            0 => 0,
            1 => 1,
            2 => 2,
            l => 1usize << (l - 2),
        }
    }

    /// Cumulative node count of the nested grid up to `level`.
    pub fn cumulative_at_level(level: u32) -> usize {
        match level {
            0 => 0,
            1 => 1,
            l => (1usize << (l - 1)) + 1,
        }
    }

    /// Fixed-point numerator of the coordinate over `2^30`.
    pub fn dyadic(self) -> u32 {
        match self.level {
            1 => DYADIC_HALF,
            2 => self.index * DYADIC_ONE,
            l => (2 * self.index + 1) << (MAX_LEVEL - l),
        }
    }

    /// Inverse of [`NodeIndex1D::dyadic`].
    pub fn from_dyadic(value: u32) -> Result<Self> {
        match value {
            DYADIC_HALF => Ok(Self::root()),
            0 => Ok(Self { level: 2, index: 0 }),
            DYADIC_ONE => Ok(Self { level: 2, index: 1 }),
            v if v > DYADIC_ONE => Err(Error::InvalidNode {
                level: 0,
                index: v,
            }),
            v => {
                let tz = v.trailing_zeros();
                Ok(Self {
                    level: MAX_LEVEL - tz,
                    index: (v >> tz) / 2,
                })
            }
        }
    }

    pub fn coord(self) -> f64 {
        self.dyadic() as f64 / SCALE
    }

    /// Value of this node's hierarchical hat function at `x`.
    pub fn basis(self, x: f64) -> f64 {
        dyadic_basis(self.dyadic(), x)
    }

    /// Closed support of the basis function.
    pub fn support(self) -> (f64, f64) {
        match self.level {
            1 => (0.0, 1.0),
            2 if self.index == 0 => (0.0, 0.5),
            2 => (0.5, 1.0),
            l => {
                let c = self.coord();
                let hw = half_width(l);
                (c - hw, c + hw)
            }
        }
    }

    /// Sons of this node one level deeper in the refinement tree.
    pub fn children(self) -> Vec<NodeIndex1D> {
        match self.level {
            1 => vec![Self { level: 2, index: 0 }, Self { level: 2, index: 1 }],
            2 => vec![Self {
                level: 3,
                index: self.index,
            }],
            MAX_LEVEL => Vec::new(),
            l => vec![
                Self {
                    level: l + 1,
                    index: 2 * self.index,
                },
                Self {
                    level: l + 1,
                    index: 2 * self.index + 1,
                },
            ],
        }
    }

    /// The node at `level` whose basis is nonzero at `x`, with its value.
    ///
    /// At most one node per level has a nonzero basis at any point.
    pub fn active_at(level: u32, x: f64) -> Option<(NodeIndex1D, f64)> {
        let node = match level {
            1 => return Some((Self::root(), 1.0)),
            2 if x < 0.5 => Self { level: 2, index: 0 },
            2 if x > 0.5 => Self { level: 2, index: 1 },
            2 => return None,
            l => {
                let cells = 1u64 << (l - 2);
                let j = ((x * cells as f64).floor().max(0.0) as u64).min(cells - 1);
                Self {
                    level: l,
                    index: j as u32,
                }
            }
        };
        let value = node.basis(x);
        (value > 0.0).then_some((node, value))
    }
}

fn half_width(level: u32) -> f64 {
    // 2^(1 - level)
    f64::powi(2.0, 1 - level as i32)
}

/// Hat function of the node with fixed-point coordinate `k`, evaluated at `x`.
pub(crate) fn dyadic_basis(k: u32, x: f64) -> f64 {
    match k {
        DYADIC_HALF => 1.0,
        0 => {
            if x < 0.5 {
                1.0 - 2.0 * x
            } else {
                0.0
            }
        }
        DYADIC_ONE => {
            if x > 0.5 {
                2.0 * x - 1.0
            } else {
                0.0
            }
        }
        _ => {
            let tz = k.trailing_zeros();
            let c = k as f64 / SCALE;
            // half-width 2^(1 - level) with level = 31 - tz
            let scale = f64::powi(2.0, FRACTION_BITS as i32 - tz as i32);
            (1.0 - (x - c).abs() * scale).max(0.0)
        }
    }
}

/// A `d`-dimensional collocation node.
///
/// The key is the vector of per-dimension fixed-point coordinates; equal
/// coordinates always produce equal keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    key: Box<[u32]>,
    depth: u32,
}

impl GridPoint {
    pub fn new(dims: &[NodeIndex1D]) -> Self {
        Self {
            key: dims.iter().map(|n| n.dyadic()).collect(),
            depth: dims.iter().map(|n| n.level).sum(),
        }
    }

    /// Rebuild a point from its canonical key.
    pub fn from_key(key: &[u32]) -> Result<Self> {
        let mut depth = 0;
        for &k in key {
            depth += NodeIndex1D::from_dyadic(k)?.level;
        }
        Ok(Self {
            key: key.into(),
            depth,
        })
    }

    /// The all-levels-one point at the center of the cube.
    pub fn root(dimension: usize) -> Self {
        Self {
            key: vec![DYADIC_HALF; dimension].into(),
            depth: dimension as u32,
        }
    }

    pub fn dimension(&self) -> usize {
        self.key.len()
    }

    pub fn key(&self) -> &[u32] {
        &self.key
    }

    /// Smolyak depth `|i|`, the sum of per-dimension levels.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn node(&self, dim: usize) -> NodeIndex1D {
        NodeIndex1D::from_dyadic(self.key[dim]).expect("grid point keys are canonical")
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeIndex1D> + '_ {
        (0..self.key.len()).map(|s| self.node(s))
    }

    pub fn coord(&self, dim: usize) -> f64 {
        self.key[dim] as f64 / SCALE
    }

    pub fn coords(&self) -> Vec<f64> {
        self.key.iter().map(|&k| k as f64 / SCALE).collect()
    }

    /// Product of one-dimensional hat functions.
    pub fn basis(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.key.len() {
            return Err(Error::DimensionMismatch {
                expected: self.key.len(),
                found: x.len(),
            });
        }
        Ok(self.basis_unchecked(x))
    }

    pub(crate) fn basis_unchecked(&self, x: &[f64]) -> f64 {
        let mut prod = 1.0;
        for (&k, &xs) in self.key.iter().zip(x) {
            if k == DYADIC_HALF {
                continue;
            }
            prod *= dyadic_basis(k, xs);
            if prod == 0.0 {
                break;
            }
        }
        prod
    }

    /// Copy of this point with dimension `dim` replaced by `node`.
    pub fn with_node(&self, dim: usize, node: NodeIndex1D) -> Self {
        let old = self.node(dim).level;
        let mut key = self.key.clone();
        key[dim] = node.dyadic();
        Self {
            key,
            depth: self.depth - old + node.level,
        }
    }

    /// All sons: for each dimension, each one-dimensional child of that
    /// dimension's node with the other coordinates held fixed.
    pub fn sons(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(2 * self.key.len());
        for s in 0..self.key.len() {
            for child in self.node(s).children() {
                out.push(self.with_node(s, child));
            }
        }
        out
    }
}
