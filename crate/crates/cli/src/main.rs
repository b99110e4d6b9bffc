use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use sgc_core::harness::persist;
use sgc_core::{moments, Error, Method, Result, RunConfig, TestSet};

#[derive(Parser)]
#[command(name = "sgc", version, about = "Sparse grid collocation surrogates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a surrogate and write it with its level report.
    Build {
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        benchmark: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean and variance of a stored surrogate.
    Moments { surrogate: PathBuf },
    /// Evaluate a stored surrogate at a point.
    Query {
        surrogate: PathBuf,
        #[arg(required = true, allow_negative_numbers = true)]
        point: Vec<f64>,
    },
    /// Run several methods on one benchmark and write one report each.
    Study {
        #[arg(long)]
        benchmark: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "csc,asgc,easgc")]
        methods: Vec<Method>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::from_file)
}

fn test_set(cfg: &RunConfig, bench: &sgc_core::Benchmark) -> Result<TestSet> {
    match cfg.test_grid {
        Some(n) => TestSet::grid(bench.model.as_ref(), n),
        None => TestSet::uniform(bench.model.as_ref(), cfg.test_points, cfg.seed),
    }
}

fn study_one(
    cfg: &RunConfig,
    bench: &sgc_core::Benchmark,
    test: &TestSet,
    method: Method,
    out: &Path,
) -> Result<(sgc_core::StudyReport, sgc_core::BuildOutput)> {
    let adaptive = cfg.adaptive(bench.dimension(), method)?;
    let (report, built) = sgc_core::run_study(bench, method, &adaptive, test, cfg.seed)?;
    std::fs::create_dir_all(out)?;
    let stem = format!("{}_{}", bench.name, method.to_string().to_lowercase());
    report.write_csv(&out.join(format!("{stem}.csv")))?;
    report.write_json(&out.join(format!("{stem}.json")))?;
    Ok((report, built))
}

fn summary(report: &sgc_core::StudyReport) -> serde_json::Value {
    let last = report.last();
    json!({
        "benchmark": report.benchmark,
        "method": report.method.to_string(),
        "levels": report.rows.len(),
        "full_evals": last.map(|r| r.full_evals),
        "spline_evals": last.map(|r| r.spline_evals),
        "max_abs_error": last.map(|r| r.max_abs_error),
        "rmse": last.map(|r| r.rmse),
        "mean": last.map(|r| r.mean),
        "variance": last.map(|r| r.variance),
        "termination": format!("{:?}", report.termination),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            method,
            benchmark,
            config,
            out,
        } => {
            let cfg = load_config(config.as_deref())?;
            let method = method
                .or(cfg.method)
                .ok_or_else(|| Error::InvalidConfig("no method given".into()))?;
            let bench = cfg.benchmark(benchmark.as_deref())?;
            let test = test_set(&cfg, &bench)?;
            let (report, built) = study_one(&cfg, &bench, &test, method, &out)?;
            persist::save(&out.join("surrogate.sgc"), &built.model, &built.regions)?;
            println!("{}", summary(&report));
        }
        Command::Moments { surrogate } => {
            let (model, _) = persist::load(&surrogate)?;
            let m = moments(&model)?;
            println!(
                "{}",
                json!({"mean": m.mean, "mean_square": m.mean_square, "variance": m.variance})
            );
        }
        Command::Query { surrogate, point } => {
            let (model, _) = persist::load(&surrogate)?;
            if let Some(bad) = point.iter().find(|t| !(0.0..=1.0).contains(*t)) {
                return Err(Error::InvalidConfig(format!(
                    "coordinate {bad} outside [0, 1]"
                )));
            }
            let value = model.interpolate(&point)?;
            println!("{}", json!({"point": point, "value": value}));
        }
        Command::Study {
            benchmark,
            config,
            methods,
            out,
        } => {
            let cfg = load_config(config.as_deref())?;
            let bench = cfg.benchmark(benchmark.as_deref())?;
            let test = test_set(&cfg, &bench)?;
            for method in methods {
                let (report, _) = study_one(&cfg, &bench, &test, method, &out)?;
                println!("{}", summary(&report));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default();
            eprintln!("{}", json!({"error": "usage", "message": first.trim_start_matches("error: ")}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::FAILURE
        }
    }
}
