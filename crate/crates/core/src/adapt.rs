//! Conventional and surplus-adaptive sparse grid construction.
//!
//! All three methods share one level-by-level engine, [`SparseGridBuilder`].
//! A level is evaluated in full (the model is read-only meanwhile), its
//! surpluses are computed against the levels below, and the whole level is
//! then inserted. The next level's candidates are the sons of either every
//! node of the level (conventional sweeps) or only of nodes whose surplus
//! magnitude reaches the tolerance (adaptive sweeps).

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridPoint;
use crate::smooth::RegionDatabase;
use crate::surrogate::{HierarchicalNode, Provenance, SurrogateModel};

/// A deterministic scalar function on `[0, 1]^d`.
pub trait Model: Send + Sync {
    fn dimension(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Result<f64>;
}

/// Closure-backed [`Model`].
pub struct FnModel<F> {
    dimension: usize,
    f: F,
}

impl<F> FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> Model for FnModel<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok((self.f)(x))
    }
}

/// A model together with a counter of full evaluations.
pub struct ModelFunction {
    model: Arc<dyn Model>,
    evaluations: AtomicUsize,
}

impl ModelFunction {
    pub fn new(model: Arc<dyn Model>) -> Self {
        Self {
            model,
            evaluations: AtomicUsize::new(0),
        }
    }

    pub fn from_fn<F>(dimension: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(Arc::new(FnModel::new(dimension, f)))
    }

    pub fn dimension(&self) -> usize {
        self.model.dimension()
    }

    pub fn model(&self) -> &Arc<dyn Model> {
        &self.model
    }

    /// Full evaluation; increments the counter exactly once.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        match self.model.evaluate(x) {
            Ok(y) if y.is_finite() => Ok(y),
            Ok(y) => Err(Error::Evaluation {
                point: x.to_vec(),
                message: format!("non-finite output {y}"),
            }),
            Err(e) => Err(Error::Evaluation {
                point: x.to_vec(),
                message: e.to_string(),
            }),
        }
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Csc,
    Asgc,
    Easgc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Csc => "CSC",
            Method::Asgc => "ASGC",
            Method::Easgc => "EASGC",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "csc" => Ok(Method::Csc),
            "asgc" => Ok(Method::Asgc),
            "easgc" => Ok(Method::Easgc),
            _ => Err(Error::InvalidConfig(format!("unknown method `{s}`"))),
        }
    }
}

/// Minimum line multiplicity meaning "never scan".
pub const UNBOUNDED_MIN_POINTS: usize = usize::MAX;

/// Every knob of the construction algorithms.
///
/// `i_max` and `i1` are Smolyak depths: the root sits at depth `dimension`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub dimension: usize,
    /// Surplus threshold.
    pub epsilon: f64,
    /// Deepest level that may be built.
    pub i_max: u32,
    /// Last level built conventionally.
    pub i1: u32,
    /// Minimum knots on a line before it is scanned for smoothness.
    pub m_min: usize,
    /// Tolerance on normalized slope changes.
    pub phi: f64,
    /// Substitute spline lookups for full evaluations in smooth regions.
    pub spline: bool,
}

impl AdaptiveConfig {
    pub fn new(dimension: usize) -> Self {
        let d = dimension as u32;
        Self {
            dimension,
            epsilon: 1e-3,
            i_max: d + 12,
            i1: d + 2,
            m_min: 9,
            phi: 0.25,
            spline: false,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_levels(mut self, i1: u32, i_max: u32) -> Self {
        self.i1 = i1;
        self.i_max = i_max;
        self
    }

    pub fn with_spline(mut self, m_min: usize, phi: f64) -> Self {
        self.spline = true;
        self.m_min = m_min;
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension as u32;
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.dimension == 0 {
            return fail("dimension must be at least 1".into());
        }
        if !(self.epsilon > 0.0) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(d <= self.i1 && self.i1 < self.i_max) {
            return fail(format!(
                "levels must satisfy d <= i1 < i_max, got d={d}, i1={}, i_max={}",
                self.i1, self.i_max
            ));
        }
        if self.m_min < 5 {
            return fail(format!("m_min must be at least 5, got {}", self.m_min));
        }
        if !(self.phi > 0.0) {
            return fail(format!("phi must be positive, got {}", self.phi));
        }
        Ok(())
    }
}

/// Why construction stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// No surplus at the last level reached the tolerance.
    Tolerance,
    /// The maximum depth was built.
    MaxLevel,
}

/// Progress of one constructed level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    /// Refinement level, `depth - dimension`; the root is level 0.
    pub level: u32,
    pub depth: u32,
    pub candidates: usize,
    pub evaluated: usize,
    pub interpolated: usize,
    pub max_abs_surplus: f64,
    /// Nodes of this level whose surplus reached the tolerance.
    pub active: usize,
    pub regions: usize,
}

/// Result of a finished construction.
#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub model: SurrogateModel,
    pub regions: RegionDatabase,
    pub levels: Vec<LevelRecord>,
    pub termination: Termination,
}

/// Level-by-level construction engine shared by all methods.
pub struct SparseGridBuilder<'f> {
    f: &'f ModelFunction,
    method: Method,
    cfg: AdaptiveConfig,
    model: SurrogateModel,
    regions: RegionDatabase,
    pending: Vec<GridPoint>,
    levels: Vec<LevelRecord>,
    termination: Option<Termination>,
}

impl<'f> SparseGridBuilder<'f> {
    /// For [`Method::Csc`] only `dimension` and `i_max` are consulted.
    pub fn new(f: &'f ModelFunction, method: Method, cfg: AdaptiveConfig) -> Result<Self> {
        if f.dimension() != cfg.dimension {
            return Err(Error::DimensionMismatch {
                expected: cfg.dimension,
                found: f.dimension(),
            });
        }
        match method {
            Method::Csc => {
                if cfg.dimension == 0 || cfg.i_max < cfg.dimension as u32 {
                    return Err(Error::InvalidConfig(format!(
                        "conventional depth {} below dimension {}",
                        cfg.i_max, cfg.dimension
                    )));
                }
            }
            Method::Asgc | Method::Easgc => cfg.validate()?,
        }
        Ok(Self {
            f,
            method,
            model: SurrogateModel::new(cfg.dimension),
            regions: RegionDatabase::new(cfg.dimension),
            pending: vec![GridPoint::root(cfg.dimension)],
            levels: Vec::new(),
            termination: None,
            cfg,
        })
    }

    pub fn model(&self) -> &SurrogateModel {
        &self.model
    }

    pub fn regions(&self) -> &RegionDatabase {
        &self.regions
    }

    pub fn levels(&self) -> &[LevelRecord] {
        &self.levels
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    fn is_conventional(&self, depth: u32) -> bool {
        self.method == Method::Csc || depth < self.cfg.i1
    }

    /// Build one more level. Returns `None` once construction has stopped.
    pub fn step(&mut self) -> Result<Option<LevelRecord>> {
        if self.termination.is_some() {
            return Ok(None);
        }
        let candidates = std::mem::take(&mut self.pending);
        let depth = candidates[0].depth();
        let use_regions = self.method == Method::Easgc && depth > self.cfg.i1;

        let values: Vec<(f64, Provenance)> = {
            let f = self.f;
            let regions = &self.regions;
            candidates
                .par_iter()
                .map(|p| {
                    if use_regions {
                        if let Some((region, t)) = regions.lookup(p) {
                            return Ok((region.value(t)?, Provenance::SplineInterpolated));
                        }
                    }
                    Ok((f.evaluate(&p.coords())?, Provenance::FullModel))
                })
                .collect::<Result<_>>()?
        };

        let nodes: Vec<HierarchicalNode> = {
            let model = &self.model;
            candidates
                .into_par_iter()
                .zip(values)
                .map(|(point, (output, provenance))| {
                    let (w, v) = model.surpluses(&point, output)?;
                    Ok(HierarchicalNode {
                        point,
                        output,
                        w,
                        v,
                        provenance,
                    })
                })
                .collect::<Result<_>>()?
        };

        let evaluated = nodes
            .iter()
            .filter(|n| n.provenance == Provenance::FullModel)
            .count();
        let max_abs_surplus = nodes.iter().map(|n| n.w.abs()).fold(0.0, f64::max);
        let active = nodes
            .iter()
            .filter(|n| n.w.abs() >= self.cfg.epsilon)
            .count();
        let candidates = nodes.len();
        self.model.insert_level(nodes)?;

        let conventional = self.is_conventional(depth);
        if !conventional && active == 0 {
            self.termination = Some(Termination::Tolerance);
        } else if depth >= self.cfg.i_max {
            self.termination = Some(Termination::MaxLevel);
        } else {
            let eps = self.cfg.epsilon;
            let fathers = self
                .model
                .level(depth)
                .iter()
                .filter(|n| conventional || n.w.abs() >= eps)
                .map(|n| &n.point);
            self.pending = refine_candidates(fathers, &self.model);
            if self.pending.is_empty() {
                self.termination = Some(Termination::MaxLevel);
            } else if self.method == Method::Easgc && depth >= self.cfg.i1 {
                self.regions
                    .scan(&self.model, self.cfg.m_min, self.cfg.phi, depth)?;
            }
        }

        let record = LevelRecord {
            level: depth - self.cfg.dimension as u32,
            depth,
            candidates,
            evaluated,
            interpolated: candidates - evaluated,
            max_abs_surplus,
            active,
            regions: self.regions.len(),
        };
        log::debug!(
            "level {} (depth {}): {} candidates, {} evaluated, max |w| {:e}",
            record.level,
            record.depth,
            record.candidates,
            record.evaluated,
            record.max_abs_surplus
        );
        self.levels.push(record.clone());
        Ok(Some(record))
    }

    pub fn run(mut self) -> Result<BuildOutput> {
        while self.step()?.is_some() {}
        Ok(self.finish())
    }

    /// Stop and hand back what has been built so far.
    pub fn finish(self) -> BuildOutput {
        BuildOutput {
            model: self.model,
            regions: self.regions,
            levels: self.levels,
            termination: self.termination.unwrap_or(Termination::MaxLevel),
        }
    }
}

/// Sons of every active point, deduplicated and without points already
/// stored in `model`, in canonical key order.
pub fn refine_candidates<'a>(
    active: impl IntoIterator<Item = &'a GridPoint>,
    model: &SurrogateModel,
) -> Vec<GridPoint> {
    let mut sons: Vec<GridPoint> = active
        .into_iter()
        .flat_map(|p| p.sons())
        .filter(|p| !model.contains(p))
        .collect();
    sons.sort_unstable();
    sons.dedup();
    sons
}

/// Conventional sparse grid with every point of depth at most `q_max`.
pub fn run_csc(f: &ModelFunction, dimension: usize, q_max: u32) -> Result<BuildOutput> {
    let mut cfg = AdaptiveConfig::new(dimension);
    cfg.i_max = q_max;
    cfg.i1 = q_max;
    SparseGridBuilder::new(f, Method::Csc, cfg)?.run()
}

/// Surplus-adaptive sparse grid.
pub fn run_asgc(f: &ModelFunction, cfg: AdaptiveConfig) -> Result<BuildOutput> {
    if cfg.spline {
        return Err(Error::InvalidConfig(
            "spline substitution requested for the plain adaptive method".into(),
        ));
    }
    SparseGridBuilder::new(f, Method::Asgc, cfg)?.run()
}
