//! Pathwise-coupled ensembles of the full and limiting dynamics, strong
//! error estimates, rate fits in ε and the γ = 2 discrimination experiment.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::langevin::{distance, FullDynamics, InitialCondition, ForcingRule, SimParams, TimeGrid};
use crate::limits::{build_drift, EulerMaruyama, LimitDrift};
use crate::noise::{NoiseDriver, StreamKey};
use crate::{Regime, System};

/// Runs independent path tasks, returning results in path order so that
/// aggregates do not depend on the schedule.
pub enum Executor {
    Serial,
    #[cfg(feature = "parallel")]
    Pool(rayon::ThreadPool),
}

impl Executor {
    pub fn serial() -> Self {
        Executor::Serial
    }

    /// `workers = 1` runs on the calling thread.
    pub fn with_workers(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(param("workers", "at least one worker is required"));
        }
        if workers == 1 {
            return Ok(Executor::Serial);
        }
        #[cfg(feature = "parallel")]
        {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map(Executor::Pool)
                .map_err(|e| Error::Configuration(format!("worker pool: {e}")))
        }
        #[cfg(not(feature = "parallel"))]
        Err(param("workers", "built without parallel support"))
    }

    pub fn workers(&self) -> usize {
        match self {
            Executor::Serial => 1,
            #[cfg(feature = "parallel")]
            Executor::Pool(p) => p.current_num_threads(),
        }
    }

    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Executor::Serial => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Pool(pool) => {
                use rayon::prelude::*;
                pool.install(|| (0..n).into_par_iter().map(f).collect())
            }
        }
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Executor({} workers)", self.workers())
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Sample mean and its standard error.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(values) / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Monte Carlo estimate of `E sup_n ‖x(t_n) − X(t_n)‖^{2p}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub epsilon: f64,
    pub estimate: f64,
    pub se: f64,
    /// Paths that entered the estimate.
    pub paths: usize,
    /// Paths dropped for non-finite states.
    pub failed: usize,
    #[serde(skip)]
    pub samples: Vec<f64>,
}

impl ErrorPoint {
    pub fn from_samples(epsilon: f64, samples: Vec<f64>, failed: usize) -> Self {
        let (estimate, se) = mean_and_se(&samples);
        ErrorPoint { epsilon, estimate, se, paths: samples.len(), failed, samples }
    }
}

/// Options shared by the ensemble runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub paths: usize,
    pub forcing: ForcingRule,
}

impl EnsembleSpec {
    pub fn new(paths: usize) -> Self {
        EnsembleSpec { paths, forcing: ForcingRule::default() }
    }
}

/// Sup over the coarse grid of `‖x − X_c‖` for every candidate limit `X_c`,
/// with the limits driven by the window sums of the path's own increments.
pub fn coupled_path(
    system: &System,
    drifts: &[LimitDrift<'_>],
    params: &SimParams,
    grid: &TimeGrid,
    init: &InitialCondition,
    key: StreamKey,
    forcing: ForcingRule,
) -> Result<Vec<f64>> {
    init.check(system.dim())?;
    let mut driver = NoiseDriver::stationary(&system.spectrum, grid.fine_dt, params.epsilon, key)?;
    let mut dynamics = FullDynamics::new(system, params, grid.fine_dt, forcing);
    let mut state = init.state();
    let mut steppers: Vec<EulerMaruyama<'_, '_>> = drifts.iter().map(|d| EulerMaruyama::new(d, grid.coarse_dt)).collect();
    let mut limits: Vec<Vec<f64>> = vec![init.x0.clone(); drifts.len()];
    let mut sups = vec![0.0f64; drifts.len()];
    let mut window = vec![0.0; system.spectrum.len()];
    for n in 0..grid.windows {
        window.fill(0.0);
        for _ in 0..grid.substeps {
            driver.advance();
            dynamics.follow(&mut state, &driver);
            for (a, w) in window.iter_mut().zip(driver.increments()) {
                *a += w;
            }
        }
        let step = (n + 1) * grid.substeps;
        if !state.is_finite() {
            return Err(Error::NonFinite { step, time: step as f64 * grid.fine_dt });
        }
        for ((stepper, x), sup) in steppers.iter_mut().zip(limits.iter_mut()).zip(sups.iter_mut()) {
            stepper.step(x, &window);
            let e = distance(&state.x, x);
            if !e.is_finite() {
                return Err(Error::NonFinite { step, time: step as f64 * grid.fine_dt });
            }
            *sup = sup.max(e);
        }
    }
    Ok(sups)
}

/// Per-candidate error points from one coupled ensemble; the samples of the
/// different candidates share paths.
pub fn coupled_errors(
    system: &System,
    regimes: &[Regime],
    params: &SimParams,
    init: &InitialCondition,
    executor: &Executor,
    ensemble: EnsembleSpec,
) -> Result<Vec<ErrorPoint>> {
    if ensemble.paths == 0 {
        return Err(param("paths", "at least one path is required"));
    }
    let grid = TimeGrid::resolve(params, &system.spectrum)?;
    let drifts = regimes.iter().map(|r| build_drift(system, *r)).collect::<Result<Vec<_>>>()?;
    let p = params.p as i32;
    let results = executor.map(ensemble.paths, |path| {
        let key = StreamKey::new(params.seed, path as u64);
        coupled_path(system, &drifts, params, &grid, init, key, ensemble.forcing)
    });
    let mut samples = vec![Vec::with_capacity(ensemble.paths); regimes.len()];
    let mut failed = 0;
    for r in results {
        match r {
            Ok(sups) => {
                for (s, sup) in samples.iter_mut().zip(sups) {
                    s.push(sup.powi(2 * p));
                }
            }
            Err(Error::NonFinite { .. }) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    // excluded only while below 1% of the ensemble
    if failed > 0 && failed * 100 >= ensemble.paths {
        return Err(Error::TooManyNonFinite { failed, total: ensemble.paths });
    }
    Ok(samples
        .into_iter()
        .map(|s| ErrorPoint::from_samples(params.epsilon, s, failed))
        .collect())
}

/// Coupled strong error against the limit of the regime fixed by `γ`.
pub fn coupled_error(
    system: &System,
    params: &SimParams,
    init: &InitialCondition,
    executor: &Executor,
    ensemble: EnsembleSpec,
) -> Result<ErrorPoint> {
    let regime = Regime::from_gamma(params.gamma, params.tau0)?;
    let mut points = coupled_errors(system, &[regime], params, init, executor, ensemble)?;
    Ok(points.remove(0))
}

/// Error points along an ε ladder, all with the same master seed.
pub fn converge(
    system: &System,
    params: &SimParams,
    ladder: &[f64],
    init: &InitialCondition,
    executor: &Executor,
    ensemble: EnsembleSpec,
) -> Result<Vec<ErrorPoint>> {
    ladder
        .iter()
        .map(|&epsilon| coupled_error(system, &SimParams { epsilon, ..params.clone() }, init, executor, ensemble))
        .collect()
}

/// Exponent of the strong-error bound: `min(γp, (2−γ)p)` for `γ < 2`,
/// `2p` at `γ = 2`, `min(2p, 2p(γ−2))` for `γ > 2`.
pub fn theory_exponent(gamma: f64, p: u32) -> f64 {
    let p = p as f64;
    if gamma < 2.0 {
        (gamma * p).min((2.0 - gamma) * p)
    } else if gamma == 2.0 {
        2.0 * p
    } else {
        (2.0 * p).min(2.0 * p * (gamma - 2.0))
    }
}

/// Least-squares fit of `log estimate` against `log ε`. The bounds hold up
/// to an arbitrarily small loss in the exponent, which a single power
/// cannot resolve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub gamma: f64,
    pub p: u32,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub theory: f64,
    pub regime: String,
    pub points: usize,
}

pub fn fit_rate(points: &[ErrorPoint], gamma: f64, p: u32) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(bad) = points.iter().find(|e| !(e.estimate > 0.0 && e.estimate.is_finite())) {
        return Err(Error::Fit(format!("nonpositive estimate {} at ε = {}", bad.estimate, bad.epsilon)));
    }
    if let Some(bad) = points.iter().find(|e| !(e.epsilon > 0.0)) {
        return Err(Error::Fit(format!("nonpositive ε = {}", bad.epsilon)));
    }
    let xs: Vec<f64> = points.iter().map(|e| e.epsilon.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|e| e.estimate.ln()).collect();
    let (slope, intercept, r2) = least_squares(&xs, &ys)?;
    let regime = Regime::from_gamma(gamma, 1.0).map(|r| r.name().to_string()).unwrap_or_default();
    Ok(RateFit { gamma, p, slope, intercept, r2, theory: theory_exponent(gamma, p), regime, points: points.len() })
}

/// Change of the fitted slope when the largest-ε point is dropped.
pub fn slope_stability(points: &[ErrorPoint], gamma: f64, p: u32) -> Result<f64> {
    let full = fit_rate(points, gamma, p)?;
    let largest = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.epsilon.total_cmp(&b.1.epsilon))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let rest: Vec<ErrorPoint> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != largest)
        .map(|(_, e)| e.clone())
        .collect();
    Ok((fit_rate(&rest, gamma, p)?.slope - full.slope).abs())
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = pairwise_sum(xs) / n;
    let my = pairwise_sum(ys) / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all ε values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateError {
    pub label: String,
    pub regime: Regime,
    pub point: ErrorPoint,
}

/// Difference of another candidate's error over the expected winner's,
/// with the standard error of the per-path differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub against: String,
    pub difference: f64,
    pub se: f64,
}

impl Margin {
    pub fn in_se(&self) -> f64 {
        self.difference / self.se
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Decisive,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub epsilon: f64,
    pub candidates: Vec<CandidateError>,
    /// Label of the candidate with the smallest estimate.
    pub smallest: String,
    pub expected: String,
    pub margins: Vec<Margin>,
    /// Required margin in standard errors.
    pub threshold: f64,
    pub outcome: Outcome,
}

pub const DISCRIMINATION_THRESHOLD: f64 = 3.0;

/// Runs the `γ = 2` dynamics against the zero, `Θ` and `Θ̂(τ₀)` limits on
/// shared paths. The outcome is decisive only when `Θ̂` is smallest and
/// beats each rival by at least three standard errors.
pub fn drift_discrimination(
    system: &System,
    params: &SimParams,
    init: &InitialCondition,
    executor: &Executor,
    ensemble: EnsembleSpec,
) -> Result<DiscriminationReport> {
    if params.gamma != 2.0 {
        return Err(param("gamma", format!("discrimination runs at γ = 2, got {}", params.gamma)));
    }
    let expected = Regime::Intermediate { tau0: params.tau0 };
    let regimes = [Regime::Ito, Regime::Stratonovich, expected];
    let points = coupled_errors(system, &regimes, params, init, executor, ensemble)?;
    let candidates: Vec<CandidateError> = regimes
        .iter()
        .zip(points)
        .map(|(r, point)| CandidateError { label: r.name().to_string(), regime: *r, point })
        .collect();
    let smallest = candidates
        .iter()
        .min_by(|a, b| a.point.estimate.total_cmp(&b.point.estimate))
        .map(|c| c.label.clone())
        .unwrap_or_default();
    let winner = &candidates[2];
    let margins: Vec<Margin> = candidates[..2]
        .iter()
        .map(|c| {
            let diffs: Vec<f64> = c.point.samples.iter().zip(&winner.point.samples).map(|(a, b)| a - b).collect();
            let (difference, se) = mean_and_se(&diffs);
            Margin { against: c.label.clone(), difference, se }
        })
        .collect();
    let decisive = smallest == winner.label && margins.iter().all(|m| m.difference >= DISCRIMINATION_THRESHOLD * m.se);
    Ok(DiscriminationReport {
        epsilon: params.epsilon,
        expected: winner.label.clone(),
        candidates,
        smallest,
        margins,
        threshold: DISCRIMINATION_THRESHOLD,
        outcome: if decisive { Outcome::Decisive } else { Outcome::Inconclusive },
    })
}

/// Standard Brownian path `β(t_j)`, `t_j = j·dt`, `j = 0..=steps`.
pub fn brownian_path(key: StreamKey, steps: usize, dt: f64) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = key.mode_stream(0);
    let sd = dt.sqrt();
    let mut path = Vec::with_capacity(steps + 1);
    let mut b = 0.0;
    path.push(b);
    for _ in 0..steps {
        let z: f64 = StandardNormal.sample(&mut rng);
        b += sd * z;
        path.push(b);
    }
    path
}

/// Mean and standard error of `S_μ − S_0` across paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuGap {
    pub mu: f64,
    pub mean: f64,
    pub se: f64,
    pub paths: usize,
}

/// For `X = β` and `f(x) = x` the μ-weighted sums differ from the
/// left-endpoint sum by `μ Σ (Δβ)²`, whose mean is `μ T`.
pub fn mu_gap(
    mus: &[f64],
    paths: usize,
    steps: usize,
    horizon: f64,
    seed: u64,
    executor: &Executor,
) -> Result<Vec<MuGap>> {
    if paths < 2 || steps == 0 || !(horizon > 0.0) {
        return Err(param("mu_demo", "needs ≥ 2 paths, ≥ 1 step and a positive horizon"));
    }
    let dt = horizon / steps as f64;
    let per_path = executor.map(paths, |p| {
        let beta = brownian_path(StreamKey::new(seed, p as u64), steps, dt);
        let base = crate::limits::mu_riemann_sum(&beta, |x| x, &beta, 0.0)?;
        mus.iter()
            .map(|&mu| Ok(crate::limits::mu_riemann_sum(&beta, |x| x, &beta, mu)? - base))
            .collect::<Result<Vec<f64>>>()
    });
    let per_path = per_path.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(mus
        .iter()
        .enumerate()
        .map(|(i, &mu)| {
            let gaps: Vec<f64> = per_path.iter().map(|g| g[i]).collect();
            let (mean, se) = mean_and_se(&gaps);
            MuGap { mu, mean, se, paths }
        })
        .collect())
}
