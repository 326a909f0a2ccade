//! Plain-Rust backends of the browser operations, testable natively.

use colored_limits::applications::solids_system;
use colored_limits::harness::{mu_gap, Executor};
use colored_limits::langevin::{simulate_full, InitialCondition, RunOptions, SimParams, TimeGrid};
use colored_limits::limits::{build_drift, simulate_limit};
use colored_limits::noise::StreamKey;
use colored_limits::Regime;

/// Most fine steps a single in-browser path may take.
pub const STEP_BUDGET: usize = 4_000_000;

/// Rows `x, B_ito, B_intermediate, B_stratonovich` of the limiting drifts of
/// the potential-noise system over one period, flattened.
pub fn drift_curves(mu0: &[f64], lambdas: &[f64], tau0: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least two points".into());
    }
    if mu0.len() > lambdas.len() {
        return Err("more mean coefficients than noise modes".into());
    }
    let mut mu = mu0.to_vec();
    mu.resize(lambdas.len(), 0.0);
    let s = solids_system(mu, lambdas.to_vec()).map_err(|e| e.to_string())?;
    let regimes = [Regime::Ito, Regime::Intermediate { tau0 }, Regime::Stratonovich];
    let drifts = regimes
        .iter()
        .map(|r| build_drift(&s.system, *r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(points * 4);
    for i in 0..points {
        let x = i as f64 * std::f64::consts::TAU / (points - 1) as f64;
        out.push(x);
        for d in &drifts {
            let mut b = [0.0];
            d.eval(&[x], &mut b);
            out.push(b[0]);
        }
    }
    Ok(out)
}

/// One coupled path of the single-mode system: rows `t, x(t), X(t)` on the
/// coarse grid, thinned to at most `max_rows` rows, flattened.
pub fn coupled_path(
    epsilon: f64,
    gamma: f64,
    tau0: f64,
    lambda: f64,
    x0: f64,
    coarse_dt: f64,
    seed: u64,
    max_rows: usize,
) -> Result<Vec<f64>, String> {
    let s = solids_system(vec![0.0], vec![lambda]).map_err(|e| e.to_string())?.system;
    let params = SimParams {
        epsilon,
        gamma,
        tau0,
        coarse_dt: (coarse_dt > 0.0).then_some(coarse_dt),
        seed,
        ..SimParams::default()
    };
    let grid = TimeGrid::resolve(&params, &s.spectrum).map_err(|e| e.to_string())?;
    if grid.fine_steps() > STEP_BUDGET {
        return Err(format!("{} fine steps exceed the demo budget of {STEP_BUDGET}", grid.fine_steps()));
    }
    let regime = Regime::from_gamma(gamma, tau0).map_err(|e| e.to_string())?;
    let init = InitialCondition::at_rest(vec![x0]);
    let opts = RunOptions { record_increments: true, ..RunOptions::default() };
    let run = simulate_full(&s, &params, &init, StreamKey::new(seed, 0), opts).map_err(|e| e.to_string())?;
    let drift = build_drift(&s, regime).map_err(|e| e.to_string())?;
    let inc = run.increments.as_ref().ok_or("missing increments")?;
    let limit = simulate_limit(&drift, inc, &run.grid, &init).map_err(|e| e.to_string())?;
    let n = run.trajectory.len();
    let stride = n.div_ceil(max_rows.max(2)).max(1);
    let mut out = Vec::new();
    for i in (0..n).filter(|i| i % stride == 0 || i + 1 == n) {
        out.extend([run.trajectory.times[i], run.trajectory.position(i)[0], limit.position(i)[0]]);
    }
    Ok(out)
}

/// Mean and standard error of `S_μ − S_0` for `X = β`, `f(x) = x` on
/// `paths` Brownian paths with `2^exponent` steps over `[0, 1]`.
pub fn mu_integral(mu: f64, exponent: u32, paths: usize, seed: u64) -> Result<Vec<f64>, String> {
    if exponent > 16 {
        return Err("grid exponent above 16 is too slow for the demo".into());
    }
    let rows = mu_gap(&[mu], paths, 1usize << exponent, 1.0, seed, &Executor::serial()).map_err(|e| e.to_string())?;
    Ok(vec![rows[0].mean, rows[0].se])
}
