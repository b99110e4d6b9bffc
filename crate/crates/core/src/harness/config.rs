//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Recognised keys are
//! `benchmark`, `method`, `epsilon`, `i_max`, `i1`, `m_min` (`inf` allowed),
//! `phi`, `seed`, `test_points` and `test_grid`; every other key is passed to
//! the benchmark as a numeric parameter.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::adapt::{AdaptiveConfig, Method, UNBOUNDED_MIN_POINTS};
use crate::error::{Error, Result};
use crate::models::{self, Benchmark};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub benchmark: Option<String>,
    pub method: Option<Method>,
    pub epsilon: Option<f64>,
    pub i_max: Option<u32>,
    pub i1: Option<u32>,
    pub m_min: Option<usize>,
    pub phi: Option<f64>,
    pub seed: u64,
    pub test_points: usize,
    /// Points per axis of a tensor test grid, replacing random test points.
    pub test_grid: Option<usize>,
    pub params: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            benchmark: None,
            method: None,
            epsilon: None,
            i_max: None,
            i1: None,
            m_min: None,
            phi: None,
            seed: 0,
            test_points: 10_000,
            test_grid: None,
            params: BTreeMap::new(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid value '{value}' for '{key}'"),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected 'key = value', got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: "empty key or value".into(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key '{key}'"),
                });
            }
            match key {
                "benchmark" => cfg.benchmark = Some(value.to_string()),
                "method" => {
                    cfg.method = Some(value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("unknown method '{value}'"),
                    })?)
                }
                "epsilon" => cfg.epsilon = Some(parse_num(line, key, value)?),
                "i_max" => cfg.i_max = Some(parse_num(line, key, value)?),
                "i1" => cfg.i1 = Some(parse_num(line, key, value)?),
                "m_min" => {
                    cfg.m_min = Some(if value.eq_ignore_ascii_case("inf") {
                        UNBOUNDED_MIN_POINTS
                    } else {
                        parse_num(line, key, value)?
                    })
                }
                "phi" => cfg.phi = Some(parse_num(line, key, value)?),
                "seed" => cfg.seed = parse_num(line, key, value)?,
                "test_points" => cfg.test_points = parse_num(line, key, value)?,
                "test_grid" => cfg.test_grid = Some(parse_num(line, key, value)?),
                _ => {
                    cfg.params.insert(key.to_string(), parse_num(line, key, value)?);
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The named benchmark (or the configured one) with this config's
    /// parameters.
    pub fn benchmark(&self, name: Option<&str>) -> Result<Benchmark> {
        let name = name
            .or(self.benchmark.as_deref())
            .ok_or_else(|| Error::InvalidConfig("no benchmark named".into()))?;
        models::benchmark(name, &self.params)
    }

    /// Construction settings for `method` in `dimension` dimensions, with
    /// unset keys at their defaults.
    pub fn adaptive(&self, dimension: usize, method: Method) -> Result<AdaptiveConfig> {
        let mut cfg = AdaptiveConfig::new(dimension);
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(i) = self.i_max {
            cfg.i_max = i;
        }
        if let Some(i) = self.i1 {
            cfg.i1 = i;
        }
        if let Some(m) = self.m_min {
            cfg.m_min = m;
        }
        if let Some(p) = self.phi {
            cfg.phi = p;
        }
        cfg.spline = method == Method::Easgc;
        if method != Method::Csc {
            cfg.validate()?;
        }
        Ok(cfg)
    }
}
