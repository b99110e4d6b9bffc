//! Benchmark functions and physics models, looked up by name.

pub mod analytic;
pub mod genz;
pub mod poisson;
pub mod truss;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::adapt::{FnModel, Model};
use crate::error::{Error, Result};

pub use genz::GenzParams;
pub use poisson::{PoissonModel, PoissonSpec};
pub use truss::{TrussCase, TrussModel, TrussSpec};

pub const BENCHMARKS: [&str; 9] = [
    "line_singularity",
    "kink",
    "sine_product",
    "genz_oscillatory",
    "genz_corner_peak",
    "genz_discontinuous",
    "poisson",
    "truss2",
    "truss3",
];

/// A named model together with every parameter it was built with.
#[derive(Clone)]
pub struct Benchmark {
    pub name: String,
    pub model: Arc<dyn Model>,
    pub params: BTreeMap<String, f64>,
}

impl std::fmt::Debug for Benchmark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Benchmark")
            .field("name", &self.name)
            .field("dimension", &self.model.dimension())
            .field("params", &self.params)
            .finish()
    }
}

impl Benchmark {
    pub fn dimension(&self) -> usize {
        self.model.dimension()
    }
}

/// Reads overrides and records the value actually used for each key.
struct Params<'a> {
    overrides: &'a BTreeMap<String, f64>,
    used: BTreeMap<String, f64>,
}

impl Params<'_> {
    fn get(&mut self, key: &str, default: f64) -> f64 {
        let v = self.overrides.get(key).copied().unwrap_or(default);
        self.used.insert(key.to_string(), v);
        v
    }

    fn dimension(&mut self, default: usize) -> Result<usize> {
        let d = self.get("dimension", default as f64);
        if !(d >= 1.0 && d.fract() == 0.0) {
            return Err(Error::InvalidConfig(format!("dimension must be a positive integer, got {d}")));
        }
        Ok(d as usize)
    }

    fn finish(self, name: &str, model: Arc<dyn Model>) -> Result<Benchmark> {
        if let Some(key) = self.overrides.keys().find(|k| !self.used.contains_key(*k)) {
            return Err(Error::InvalidConfig(format!(
                "unknown parameter '{key}' for benchmark '{name}'"
            )));
        }
        Ok(Benchmark {
            name: name.to_string(),
            model,
            params: self.used,
        })
    }
}

fn genz_params(p: &mut Params, dimension: usize, defaults: GenzParams) -> Result<GenzParams> {
    let params = GenzParams {
        w1: p.get("w1", defaults.w1),
        w2: p.get("w2", defaults.w2),
        c: (0..dimension)
            .map(|i| p.get(&format!("c{}", i + 1), defaults.c[i]))
            .collect(),
    };
    params.validate()?;
    Ok(params)
}

type GenzFn = fn(&[f64], &GenzParams) -> f64;

/// Build the benchmark `name`, overriding default parameters.
pub fn benchmark(name: &str, overrides: &BTreeMap<String, f64>) -> Result<Benchmark> {
    let mut p = Params {
        overrides,
        used: BTreeMap::new(),
    };
    let model: Arc<dyn Model> = match name {
        "line_singularity" => Arc::new(FnModel::new(2, |x: &[f64]| {
            analytic::line_singularity(x[0], x[1])
        })),
        "kink" => {
            let at = p.get("at", 0.4375);
            Arc::new(FnModel::new(1, move |x: &[f64]| analytic::kink(x[0], at)))
        }
        "sine_product" => {
            let d = p.dimension(2)?;
            Arc::new(FnModel::new(d, |x: &[f64]| analytic::sine_product(x)))
        }
        "genz_oscillatory" | "genz_corner_peak" | "genz_discontinuous" => {
            let d = p.dimension(5)?;
            let (defaults, f): (GenzParams, GenzFn) = match name {
                "genz_oscillatory" => (GenzParams::oscillatory_default(d), genz::oscillatory),
                "genz_corner_peak" => (GenzParams::corner_peak_default(d), genz::corner_peak),
                _ => (GenzParams::discontinuous_default(d), genz::discontinuous),
            };
            let params = genz_params(&mut p, d, defaults)?;
            Arc::new(FnModel::new(d, move |x: &[f64]| f(x, &params)))
        }
        "poisson" => {
            let mut spec = PoissonSpec::new(p.dimension(10)?);
            spec.lc = p.get("lc", spec.lc);
            spec.n_cells = p.get("n_cells", spec.n_cells as f64) as usize;
            spec.x_obs = p.get("x_obs", spec.x_obs);
            if let Some(&k) = overrides.get("kappa0") {
                spec.constant_kappa = Some(p.get("kappa0", k));
            }
            Arc::new(PoissonModel::new(spec)?)
        }
        "truss2" | "truss3" => {
            let case = if name == "truss2" {
                TrussCase::TwoDiagonals
            } else {
                TrussCase::ThreeMembers
            };
            let mut spec = TrussSpec::new(case);
            spec.e = p.get("e", spec.e);
            spec.p = p.get("p", spec.p);
            spec.buckling = p.get("buckling", 1.0) != 0.0;
            spec.validate()?;
            Arc::new(TrussModel { spec })
        }
        other => return Err(Error::UnknownBenchmark(other.to_string())),
    };
    p.finish(name, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_builds() {
        for name in BENCHMARKS {
            let b = benchmark(name, &BTreeMap::new()).unwrap();
            let x = vec![0.3; b.dimension()];
            assert!(b.model.evaluate(&x).unwrap().is_finite(), "{name}");
        }
    }

    #[test]
    fn overrides_are_echoed_and_checked() {
        let mut o = BTreeMap::new();
        o.insert("dimension".to_string(), 3.0);
        o.insert("c2".to_string(), 1.0);
        let b = benchmark("genz_corner_peak", &o).unwrap();
        assert_eq!(b.dimension(), 3);
        assert_eq!(b.params["c2"], 1.0);
        assert!(b.params.contains_key("w1"));
        o.insert("bogus".to_string(), 1.0);
        assert!(matches!(
            benchmark("genz_corner_peak", &o),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            benchmark("nope", &BTreeMap::new()),
            Err(Error::UnknownBenchmark(_))
        ));
    }
}
