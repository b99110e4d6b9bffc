//! The hierarchical sparse grid interpolant.
//!
//! A model stores one node per grid point together with two hierarchical
//! surpluses: `w` for the output and `v` for the squared output. Evaluation
//! sums surplus times basis over every node whose support contains the query.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dyadic_basis, GridPoint, NodeIndex1D, DYADIC_HALF};

/// How a node's output value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    FullModel,
    SplineInterpolated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalNode {
    pub point: GridPoint,
    pub output: f64,
    /// Surplus of the output.
    pub w: f64,
    /// Surplus of the squared output.
    pub v: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub full: usize,
    pub spline: usize,
}

impl EvalCounts {
    pub fn total(&self) -> usize {
        self.full + self.spline
    }
}

#[derive(Debug, Clone)]
pub struct SurrogateModel {
    dimension: usize,
    nodes: Vec<HierarchicalNode>,
    index: HashMap<Box<[u32]>, usize>,
    /// `(depth, first node index)` for each stored level, ascending.
    levels: Vec<(u32, usize)>,
    max_level: Vec<u32>,
    counts: EvalCounts,
}

impl SurrogateModel {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            nodes: Vec::new(),
            index: HashMap::new(),
            levels: Vec::new(),
            max_level: vec![0; dimension],
            counts: EvalCounts::default(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Deepest Smolyak depth present, 0 for an empty model.
    pub fn depth(&self) -> u32 {
        self.levels.last().map_or(0, |&(q, _)| q)
    }

    pub fn counts(&self) -> EvalCounts {
        self.counts
    }

    pub fn nodes(&self) -> &[HierarchicalNode] {
        &self.nodes
    }

    pub fn get(&self, point: &GridPoint) -> Option<&HierarchicalNode> {
        self.index.get(point.key()).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, point: &GridPoint) -> bool {
        self.index.contains_key(point.key())
    }

    /// Stored depths in ascending order.
    pub fn depths(&self) -> impl Iterator<Item = u32> + '_ {
        self.levels.iter().map(|&(q, _)| q)
    }

    /// Nodes born at Smolyak depth `depth`.
    pub fn level(&self, depth: u32) -> &[HierarchicalNode] {
        match self.levels.iter().position(|&(q, _)| q == depth) {
            Some(i) => {
                let start = self.levels[i].1;
                let end = self.levels.get(i + 1).map_or(self.nodes.len(), |l| l.1);
                &self.nodes[start..end]
            }
            None => &[],
        }
    }

    /// Append a whole new level. All nodes must share one depth strictly
    /// greater than the current model depth, and be new.
    pub fn insert_level(&mut self, nodes: Vec<HierarchicalNode>) -> Result<()> {
        let Some(first) = nodes.first() else {
            return Ok(());
        };
        let depth = first.point.depth();
        if depth <= self.depth() {
            return Err(Error::ContractViolation(format!(
                "level of depth {depth} inserted into model of depth {}",
                self.depth()
            )));
        }
        for node in &nodes {
            if node.point.dimension() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: node.point.dimension(),
                });
            }
            if node.point.depth() != depth {
                return Err(Error::ContractViolation(
                    "mixed depths within one level".into(),
                ));
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(nodes.len());
        for node in &nodes {
            if !seen.insert(node.point.key()) || self.index.contains_key(node.point.key()) {
                return Err(Error::ContractViolation(format!(
                    "duplicate node {:?}",
                    node.point.coords()
                )));
            }
        }
        drop(seen);
        let start = self.nodes.len();
        for node in nodes {
            self.index.insert(node.point.key().into(), self.nodes.len());
            for (s, n) in node.point.nodes().enumerate() {
                self.max_level[s] = self.max_level[s].max(n.level());
            }
            match node.provenance {
                Provenance::FullModel => self.counts.full += 1,
                Provenance::SplineInterpolated => self.counts.spline += 1,
            }
            self.nodes.push(node);
        }
        self.levels.push((depth, start));
        Ok(())
    }

    /// Surrogate value at `x`.
    pub fn interpolate(&self, x: &[f64]) -> Result<f64> {
        self.check_query(x)?;
        Ok(self.evaluate_pair(x).0)
    }

    /// Surrogate values of the output and of the squared output at `x`.
    pub fn interpolate_pair(&self, x: &[f64]) -> Result<(f64, f64)> {
        self.check_query(x)?;
        Ok(self.evaluate_pair(x))
    }

    /// Hierarchical surplus of `value` at `point` against this model.
    ///
    /// The model must hold only levels strictly below the point's depth.
    pub fn compute_surplus(&self, point: &GridPoint, value: f64) -> Result<f64> {
        Ok(self.surpluses(point, value)?.0)
    }

    /// Surpluses `(w, v)` of `value` and `value^2` at `point`.
    pub fn surpluses(&self, point: &GridPoint, value: f64) -> Result<(f64, f64)> {
        if point.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: point.dimension(),
            });
        }
        if self.is_empty() {
            return Ok((value, value * value));
        }
        if self.depth() >= point.depth() {
            return Err(Error::ContractViolation(format!(
                "surplus at depth {} requested from a model of depth {}",
                point.depth(),
                self.depth()
            )));
        }
        let (u, u2) = self.evaluate_pair(&point.coords());
        Ok((value - u, value * value - u2))
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyModel);
        }
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn evaluate_pair(&self, x: &[f64]) -> (f64, f64) {
        let chains: Vec<Vec<(u32, u32, f64)>> = x
            .iter()
            .zip(&self.max_level)
            .map(|(&xs, &top)| {
                (1..=top)
                    .filter_map(|l| NodeIndex1D::active_at(l, xs))
                    .map(|(n, val)| (n.dyadic(), n.level(), val))
                    .collect()
            })
            .collect();
        if self.tree_combinations(&chains) <= self.nodes.len() as f64 {
            self.evaluate_tree(&chains)
        } else {
            self.evaluate_direct(x)
        }
    }

    /// Number of level tuples the tree walk may visit.
    fn tree_combinations(&self, chains: &[Vec<(u32, u32, f64)>]) -> f64 {
        let budget = self.depth() as usize;
        // ways[b] = number of partial tuples with level sum b
        let mut ways = vec![0.0f64; budget + 1];
        ways[0] = 1.0;
        for chain in chains {
            let mut next = vec![0.0f64; budget + 1];
            for (b, &count) in ways.iter().enumerate() {
                if count == 0.0 {
                    continue;
                }
                for &(_, level, _) in chain {
                    let nb = b + level as usize;
                    if nb <= budget {
                        next[nb] += count;
                    }
                }
            }
            ways = next;
        }
        ways.iter().sum()
    }

    fn evaluate_tree(&self, chains: &[Vec<(u32, u32, f64)>]) -> (f64, f64) {
        let d = self.dimension;
        // slack counts the level increments above one still available
        let mut key = vec![DYADIC_HALF; d];
        let mut acc = (0.0, 0.0);
        self.walk(chains, 0, self.depth() as i64 - d as i64, 1.0, &mut key, &mut acc);
        acc
    }

    fn walk(
        &self,
        chains: &[Vec<(u32, u32, f64)>],
        dim: usize,
        slack: i64,
        prod: f64,
        key: &mut Vec<u32>,
        acc: &mut (f64, f64),
    ) {
        if dim == chains.len() {
            if let Some(&i) = self.index.get(key.as_slice()) {
                let node = &self.nodes[i];
                acc.0 += node.w * prod;
                acc.1 += node.v * prod;
            }
            return;
        }
        for &(k, level, val) in &chains[dim] {
            let extra = level as i64 - 1;
            if extra > slack {
                break;
            }
            key[dim] = k;
            self.walk(chains, dim + 1, slack - extra, prod * val, key, acc);
        }
        key[dim] = DYADIC_HALF;
    }

    fn evaluate_direct(&self, x: &[f64]) -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for node in &self.nodes {
            let mut prod = 1.0;
            for (&k, &xs) in node.point.key().iter().zip(x) {
                if k != DYADIC_HALF {
                    prod *= dyadic_basis(k, xs);
                    if prod == 0.0 {
                        break;
                    }
                }
            }
            if prod != 0.0 {
                acc.0 += node.w * prod;
                acc.1 += node.v * prod;
            }
        }
        acc
    }

    /// Reference evaluation summing over every node; used to cross-check the
    /// tree walk.
    pub fn interpolate_exhaustive(&self, x: &[f64]) -> Result<f64> {
        self.check_query(x)?;
        Ok(self.evaluate_direct(x).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build_1d(f: impl Fn(f64) -> f64, depth: u32) -> SurrogateModel {
        let mut model = SurrogateModel::new(1);
        let mut frontier = vec![GridPoint::root(1)];
        for _ in 1..=depth {
            let nodes: Vec<_> = frontier
                .iter()
                .map(|p| {
                    let y = f(p.coord(0));
                    let (w, v) = model.surpluses(p, y).unwrap();
                    HierarchicalNode {
                        point: p.clone(),
                        output: y,
                        w,
                        v,
                        provenance: Provenance::FullModel,
                    }
                })
                .collect();
            model.insert_level(nodes).unwrap();
            let mut next: Vec<_> = frontier.iter().flat_map(|p| p.sons()).collect();
            next.sort();
            next.dedup();
            frontier = next;
        }
        model
    }

    #[test]
    fn root_only_is_constant() {
        let model = build_1d(|_| 3.7, 1);
        assert_eq!(model.interpolate(&[0.1]).unwrap(), 3.7);
        assert_eq!(model.interpolate(&[0.9]).unwrap(), 3.7);
    }

    #[test]
    fn linear_function_levels_one_two() {
        let model = build_1d(|x| x, 2);
        assert_eq!(model.len(), 3);
        assert_eq!(model.interpolate(&[0.25]).unwrap(), 0.25);
        let w: Vec<f64> = model.nodes().iter().map(|n| n.w).collect();
        assert_eq!(w, vec![0.5, -0.5, 0.5]);
        let v: Vec<f64> = model.nodes().iter().map(|n| n.v).collect();
        assert_eq!(v, vec![0.25, -0.25, 0.75]);
    }

    #[test]
    fn surplus_examples() {
        let empty = SurrogateModel::new(3);
        assert_eq!(empty.compute_surplus(&GridPoint::root(3), 4.2).unwrap(), 4.2);

        let model = build_1d(|x| x, 1);
        let p = GridPoint::new(&[NodeIndex1D::new(2, 0).unwrap()]);
        assert_eq!(model.compute_surplus(&p, 0.0).unwrap(), -0.5);
        assert_eq!(model.compute_surplus(&p, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn surplus_contract_violation() {
        let model = build_1d(|x| x, 2);
        let p = GridPoint::new(&[NodeIndex1D::new(2, 1).unwrap()]);
        assert!(matches!(
            model.compute_surplus(&p, 1.0),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn empty_model_query_fails() {
        let model = SurrogateModel::new(2);
        assert!(matches!(model.interpolate(&[0.1, 0.2]), Err(Error::EmptyModel)));
    }

    #[test]
    fn duplicate_level_rejected() {
        let mut model = build_1d(|x| x, 1);
        let p = GridPoint::new(&[NodeIndex1D::new(2, 0).unwrap()]);
        let node = HierarchicalNode {
            point: p,
            output: 0.0,
            w: 0.0,
            v: 0.0,
            provenance: Provenance::FullModel,
        };
        assert!(model.insert_level(vec![node.clone(), node]).is_err());
        assert_eq!(model.len(), 1);
        assert_eq!(model.depth(), 1);
    }

    #[test]
    fn telescoping_matches_piecewise_linear_oracle() {
        let f = |x: f64| (3.0 * x).sin() + x * x;
        let model = build_1d(f, 7);
        // brute-force oracle: sort node coordinates and interpolate linearly
        let mut knots: Vec<(f64, f64)> =
            model.nodes().iter().map(|n| (n.point.coord(0), n.output)).collect();
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        let oracle = |x: f64| {
            let k = knots.partition_point(|&(c, _)| c <= x).clamp(1, knots.len() - 1);
            let (x0, y0) = knots[k - 1];
            let (x1, y1) = knots[k];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        };
        for i in 0..100 {
            let x = (i as f64 + 0.37) / 100.0;
            let got = model.interpolate(&[x]).unwrap();
            assert!((got - oracle(x)).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn tree_and_direct_evaluation_agree() {
        let model = build_1d(|x| (5.0 * x).cos(), 8);
        for i in 0..50 {
            let x = [i as f64 / 49.0];
            let a = model.interpolate(&x).unwrap();
            let b = model.interpolate_exhaustive(&x).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }
}
