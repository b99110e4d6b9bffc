//! Database of one-dimensional segments certified smooth, each carrying a
//! cubic spline that stands in for the model along that segment.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::GridPoint;
use crate::smooth::lines::{anchor_of, derivative_scan, group_lines};
use crate::smooth::spline::CubicSpline;
use crate::surrogate::SurrogateModel;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothRegion {
    pub dim: usize,
    pub anchor: Box<[u32]>,
    pub knots: Vec<f64>,
    pub outputs: Vec<f64>,
    /// Midpoint of the knot span.
    pub mid: f64,
    /// Half the length of the knot span.
    pub half: f64,
    pub spline: CubicSpline,
    /// Insertion sequence number; lower means older.
    pub created: u64,
    /// Construction depth at which the region was certified.
    pub level: u32,
}

impl SmoothRegion {
    pub fn new(
        dim: usize,
        anchor: Box<[u32]>,
        knots: Vec<f64>,
        outputs: Vec<f64>,
        level: u32,
    ) -> Result<Self> {
        let spline = CubicSpline::not_a_knot(&knots, &outputs)?;
        let (lo, hi) = (spline.lower(), spline.upper());
        Ok(Self {
            dim,
            anchor,
            knots,
            outputs,
            mid: 0.5 * (lo + hi),
            half: 0.5 * (hi - lo),
            spline,
            created: 0,
            level,
        })
    }

    pub fn lower(&self) -> f64 {
        self.spline.lower()
    }

    pub fn upper(&self) -> f64 {
        self.spline.upper()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lower() && t <= self.upper()
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.spline.eval(t)
    }

    /// Largest spacing between neighbouring knots.
    pub fn max_gap(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    fn same_span(&self, other: &SmoothRegion) -> bool {
        self.lower() == other.lower() && self.upper() == other.upper()
    }

    fn covers(&self, other: &SmoothRegion) -> bool {
        self.lower() <= other.lower() && self.upper() >= other.upper()
    }

    fn overlaps(&self, other: &SmoothRegion) -> bool {
        self.lower() < other.upper() && other.lower() < self.upper()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreOutcome {
    Inserted,
    Unchanged,
    /// Inserted in place of this many older regions it covers.
    Replaced(usize),
    Rejected,
}

#[derive(Debug, Clone)]
pub struct RegionDatabase {
    dimension: usize,
    lines: Vec<HashMap<Box<[u32]>, Vec<SmoothRegion>>>,
    len: usize,
    next_seq: u64,
}

impl RegionDatabase {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            lines: vec![HashMap::new(); dimension],
            len: 0,
            next_seq: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Add a region. Spans touching at a single shared knot do not overlap.
    /// A region covering existing ones on the same line replaces them, one
    /// covered by an existing region is rejected, and for a partial overlap
    /// the longer span is kept.
    pub fn store(&mut self, mut region: SmoothRegion) -> Result<StoreOutcome> {
        if region.dim >= self.dimension || region.anchor.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: region.anchor.len(),
            });
        }
        let line = self.lines[region.dim]
            .entry(region.anchor.clone())
            .or_default();

        let mut displaced = Vec::new();
        for (i, old) in line.iter().enumerate() {
            if !old.overlaps(&region) {
                continue;
            }
            if old.same_span(&region) || old.covers(&region) {
                return Ok(if old.same_span(&region) {
                    StoreOutcome::Unchanged
                } else {
                    StoreOutcome::Rejected
                });
            }
            if !region.covers(old) {
                if old.half >= region.half {
                    log::debug!(
                        "dim {} region [{}, {}] partially overlaps [{}, {}]; keeping the older",
                        region.dim,
                        region.lower(),
                        region.upper(),
                        old.lower(),
                        old.upper()
                    );
                    return Ok(StoreOutcome::Rejected);
                }
                log::debug!(
                    "dim {} region [{}, {}] partially overlaps [{}, {}]; keeping the newer",
                    region.dim,
                    region.lower(),
                    region.upper(),
                    old.lower(),
                    old.upper()
                );
            }
            displaced.push(i);
        }

        for &i in displaced.iter().rev() {
            line.remove(i);
        }
        region.created = self.next_seq;
        self.next_seq += 1;
        let pos = line.partition_point(|r| r.lower() < region.lower());
        line.insert(pos, region);
        self.len = self.len + 1 - displaced.len();
        Ok(match displaced.len() {
            0 => StoreOutcome::Inserted,
            n => StoreOutcome::Replaced(n),
        })
    }

    /// Oldest region along any axis through `p` whose span contains `p`,
    /// with `p`'s coordinate along that axis.
    pub fn lookup(&self, p: &GridPoint) -> Option<(&SmoothRegion, f64)> {
        if self.is_empty() || p.dimension() != self.dimension {
            return None;
        }
        let mut best: Option<(&SmoothRegion, f64)> = None;
        for (dim, lines) in self.lines.iter().enumerate() {
            if lines.is_empty() {
                continue;
            }
            let Some(line) = lines.get(&anchor_of(p, dim)) else {
                continue;
            };
            let t = p.coord(dim);
            if let Some(r) = line.iter().find(|r| r.contains(t)) {
                if best.is_none_or(|(b, _)| r.created < b.created) {
                    best = Some((r, t));
                }
            }
        }
        best
    }

    /// All regions in creation order.
    pub fn regions(&self) -> Vec<&SmoothRegion> {
        let mut all: Vec<&SmoothRegion> = self
            .lines
            .iter()
            .flat_map(|m| m.values().flatten())
            .collect();
        all.sort_by_key(|r| r.created);
        all
    }

    /// Scan every axis-parallel line of `model` and store the smooth
    /// segments found. Returns the number of regions inserted or replaced.
    pub fn scan(&mut self, model: &SurrogateModel, m_min: usize, phi: f64, level: u32) -> Result<usize> {
        let mut stored = 0;
        for dim in 0..self.dimension {
            for line in group_lines(model, dim) {
                for run in derivative_scan(&line, m_min, phi) {
                    let (knots, outputs): (Vec<f64>, Vec<f64>) =
                        line.samples[run].iter().copied().unzip();
                    let region =
                        SmoothRegion::new(dim, line.anchor.clone(), knots, outputs, level)?;
                    if matches!(
                        self.store(region)?,
                        StoreOutcome::Inserted | StoreOutcome::Replaced(_)
                    ) {
                        stored += 1;
                    }
                }
            }
        }
        Ok(stored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::NodeIndex1D;
    use crate::smooth::lines::ANCHOR_FREE;

    fn region(lo: f64, hi: f64, n: usize) -> SmoothRegion {
        let knots: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let outputs = knots.iter().map(|x| x * x).collect();
        let anchor: Box<[u32]> = vec![ANCHOR_FREE, 1 << 29].into();
        SmoothRegion::new(0, anchor, knots, outputs, 3).unwrap()
    }

    fn point(x: f64) -> GridPoint {
        let x = NodeIndex1D::from_dyadic((x * (1u64 << 30) as f64) as u32).unwrap();
        GridPoint::new(&[x, NodeIndex1D::root()])
    }

    #[test]
    fn store_rules() {
        let mut db = RegionDatabase::new(2);
        assert_eq!(db.store(region(0.0, 0.5, 5)).unwrap(), StoreOutcome::Inserted);
        assert_eq!(db.len(), 1);
        assert_eq!(db.store(region(0.0, 0.5, 5)).unwrap(), StoreOutcome::Unchanged);
        assert_eq!(db.store(region(0.125, 0.5, 4)).unwrap(), StoreOutcome::Rejected);
        assert_eq!(db.store(region(0.5, 1.0, 5)).unwrap(), StoreOutcome::Inserted);
        assert_eq!(db.len(), 2);
        assert_eq!(db.store(region(0.0, 1.0, 9)).unwrap(), StoreOutcome::Replaced(2));
        assert_eq!(db.len(), 1);
        assert_eq!(db.regions()[0].knots.len(), 9);
    }

    #[test]
    fn partial_overlap_keeps_longer() {
        let mut db = RegionDatabase::new(2);
        db.store(region(0.0, 0.5, 5)).unwrap();
        assert_eq!(db.store(region(0.25, 0.625, 4)).unwrap(), StoreOutcome::Rejected);
        assert_eq!(db.store(region(0.25, 1.0, 7)).unwrap(), StoreOutcome::Replaced(1));
        assert_eq!(db.len(), 1);
        assert_eq!(db.regions()[0].lower(), 0.25);
    }

    #[test]
    fn lookup_containment() {
        let mut db = RegionDatabase::new(2);
        assert!(db.lookup(&point(0.25)).is_none());
        let r = region(0.0, 0.5, 5);
        let (mid, half) = (r.mid, r.half);
        db.store(r).unwrap();
        let (hit, t) = db.lookup(&point(mid)).unwrap();
        assert_eq!(t, mid);
        assert!((hit.value(t).unwrap() - mid * mid).abs() < 1e-15);
        assert!(db.lookup(&point(mid + 1.5 * half)).is_none());
        // same coordinate, different anchor
        let other = GridPoint::new(&[
            NodeIndex1D::from_dyadic(1 << 28).unwrap(),
            NodeIndex1D::new(2, 0).unwrap(),
        ]);
        assert!(db.lookup(&other).is_none());
    }

    #[test]
    fn earliest_region_wins_across_dims() {
        let mut db = RegionDatabase::new(2);
        let p = GridPoint::new(&[
            NodeIndex1D::from_dyadic(1 << 28).unwrap(),
            NodeIndex1D::from_dyadic(3 << 28).unwrap(),
        ]);
        let along = |dim: usize| {
            let knots = vec![0.0, 0.25, 0.5, 0.75, 1.0];
            let outputs = vec![dim as f64; 5];
            SmoothRegion::new(dim, anchor_of(&p, dim), knots, outputs, 3).unwrap()
        };
        db.store(along(1)).unwrap();
        db.store(along(0)).unwrap();
        let (r, t) = db.lookup(&p).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(t, 0.75);
    }
}
