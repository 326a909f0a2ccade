use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use colored_limits::harness::{self, EnsembleSpec, Executor, Outcome};
use colored_limits::langevin::{simulate_full, RunOptions, Trajectory};
use colored_limits::limits::{build_drift, mu_from_tau0, simulate_limit};
use colored_limits::noise::StreamKey;
use colored_limits::spectrum::check_conditions;
use colored_limits::table::{self, Table};
use colored_limits::Regime;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Experiment, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Assertion { name: name.to_string(), passed, detail }
    }
}

/// Tables and verdicts of an experiment, before anything is written.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub tables: Vec<(String, Table)>,
    pub assertions: Vec<Assertion>,
    pub results: Value,
}

impl Artifacts {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub seed: u64,
    pub workers: usize,
    pub wall_time_s: f64,
    pub config: RunConfig,
    pub tables: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    pub results: Value,
}

/// Runs the configured experiment without touching the filesystem.
pub fn execute(config: &RunConfig, executor: &Executor) -> Result<Artifacts> {
    let (system, init) = config.system.build().context("stage system")?;
    let params = config.sim_params();
    let regime = Regime::from_gamma(params.gamma, params.tau0).context("stage params")?;
    let conditions = check_conditions(system.spectrum.exponents(), regime);
    let mut tables = Vec::new();
    let mut assertions = Vec::new();
    let forcing = config.params.forcing;

    let mut results = match config.experiment {
        Experiment::Simulate => {
            let key = StreamKey::new(params.seed, config.simulate.path);
            let opts = RunOptions { forcing, record_increments: true, ..RunOptions::default() };
            let run = simulate_full(&system, &params, &init, key, opts).context("stage simulate_full")?;
            let drift = build_drift(&system, regime).context("stage build_drift")?;
            let increments = run.increments.as_ref().context("stage simulate_full: increments missing")?;
            let limit = simulate_limit(&drift, increments, &run.grid, &init).context("stage simulate_limit")?;
            let sup = run.trajectory.sup_distance(&limit)?;
            let stride = config.simulate.stride;
            let t = table::trajectory_table(&thin(&run.trajectory, stride), &thin(&limit, stride))?;
            tables.push(("trajectory.csv".to_string(), t));
            json!({
                "regime": regime.name(),
                "coarse_dt": run.grid.coarse_dt,
                "fine_dt": run.grid.fine_dt,
                "windows": run.grid.windows,
                "substeps": run.grid.substeps,
                "sup_distance": sup,
            })
        }
        Experiment::Converge => {
            let c = &config.converge;
            let ensemble = EnsembleSpec { paths: c.paths, forcing };
            let points = harness::converge(&system, &params, &c.ladder, &init, executor, ensemble).context("stage coupled_error")?;
            let fit = harness::fit_rate(&points, params.gamma, params.p).context("stage fit_rate")?;
            let shift = if points.len() >= 4 {
                Some(harness::slope_stability(&points, params.gamma, params.p).context("stage fit_rate")?)
            } else {
                None
            };
            let tol = c.tolerance_for(params.gamma);
            let (lo, hi) = (fit.theory - tol, fit.theory + tol);
            assertions.push(Assertion::new(
                "slope_within_band",
                (lo..=hi).contains(&fit.slope),
                format!("slope {:.4} against [{lo}, {hi}] around theory {}", fit.slope, fit.theory),
            ));
            if let Some(shift) = shift {
                assertions.push(Assertion::new(
                    "slope_stability",
                    shift < c.stability,
                    format!("dropping the largest ε moves the slope by {shift:.4} (limit {})", c.stability),
                ));
            }
            tables.push(("errors.csv".to_string(), table::errors_table(&points)));
            tables.push(("ratefit.csv".to_string(), table::fits_table(std::slice::from_ref(&fit))));
            json!({
                "regime": regime.name(),
                "points": points,
                "fit": fit,
                "slope_shift_without_largest_epsilon": shift,
                "note": "the bounds hold up to an arbitrarily small loss in the exponent; a single power is fitted",
            })
        }
        Experiment::Discriminate => {
            let ensemble = EnsembleSpec { paths: config.discriminate.paths, forcing };
            let report = harness::drift_discrimination(&system, &params, &init, executor, ensemble).context("stage drift_discrimination")?;
            let margins: Vec<String> = report.margins.iter().map(|m| format!("{}: {:.2} SE", m.against, m.in_se())).collect();
            assertions.push(Assertion::new(
                "intermediate_limit_wins",
                report.outcome == Outcome::Decisive,
                format!("smallest {}; margins {}", report.smallest, margins.join(", ")),
            ));
            tables.push(("discrimination.csv".to_string(), table::discrimination_table(&report)));
            json!({ "report": report })
        }
        Experiment::CheckSpectrum => {
            let verdict = conditions.all_converge();
            assertions.push(Assertion::new(
                "conditions_hold",
                verdict == Some(true),
                match verdict {
                    Some(true) => "every series converges".to_string(),
                    Some(false) => "at least one series diverges".to_string(),
                    None => "spectrum carries no power-law metadata".to_string(),
                },
            ));
            tables.push(("conditions.csv".to_string(), table::conditions_table(&conditions)));
            json!({ "regime": regime.name() })
        }
        Experiment::MuDemo => {
            let m = &config.mu_demo;
            let mut mus = m.mus.clone();
            for [alpha, tau0] in &m.from_tau0 {
                mus.push(mu_from_tau0(*alpha, *tau0)?);
            }
            let steps = 1usize << m.grid_exponent;
            let rows = harness::mu_gap(&mus, m.paths, steps, params.horizon, params.seed, executor).context("stage mu_riemann_sum")?;
            for r in &rows {
                let expect = r.mu * params.horizon;
                assertions.push(Assertion::new(
                    &format!("gap_mu_{}", r.mu),
                    (r.mean - expect).abs() <= 3.0 * r.se,
                    format!("mean {:.5} ± {:.5} against μT = {expect}", r.mean, r.se),
                ));
            }
            let table_rows: Vec<_> = rows.iter().map(|r| (r.mu, r.mean, r.se, r.paths)).collect();
            tables.push(("mu.csv".to_string(), table::mu_table(&table_rows)));
            json!({ "rows": rows, "steps": steps })
        }
    };
    if let Value::Object(map) = &mut results {
        map.insert("conditions".to_string(), serde_json::to_value(&conditions)?);
    }
    Ok(Artifacts { tables, assertions, results })
}

fn thin(t: &Trajectory, stride: usize) -> Trajectory {
    let mut out = Trajectory::new(t.dim, false);
    for n in (0..t.len()).filter(|n| n % stride == 0 || *n + 1 == t.len()) {
        out.push_position(t.times[n], t.position(n));
    }
    out
}

/// Runs the experiment and writes its tables and `summary.json` into `out`.
pub fn run(config: &RunConfig, out: &Path, workers: usize) -> Result<Summary> {
    let started = Instant::now();
    let executor = Executor::with_workers(workers).context("stage executor")?;
    let artifacts = execute(config, &executor)?;
    fs::create_dir_all(out).with_context(|| format!("stage output: creating {}", out.display()))?;
    let mut names = Vec::new();
    for (name, t) in &artifacts.tables {
        let path = out.join(name);
        fs::write(&path, t.to_csv()?).with_context(|| format!("stage output: writing {}", path.display()))?;
        names.push(name.clone());
    }
    let summary = Summary {
        tool: "colored-limits",
        version: env!("CARGO_PKG_VERSION"),
        experiment: config.experiment.name(),
        seed: config.seed,
        workers,
        wall_time_s: started.elapsed().as_secs_f64(),
        config: config.clone(),
        tables: names,
        passed: artifacts.passed(),
        assertions: artifacts.assertions,
        results: artifacts.results,
    };
    let path = out.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)?).with_context(|| format!("stage output: writing {}", path.display()))?;
    Ok(summary)
}
