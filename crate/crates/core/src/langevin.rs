//! The full inertial dynamics `τ₀ ε^γ ẍ = b(x) + v(x, t)/ε − ẋ`, integrated on
//! the fine grid with an exponential (variation-of-constants) step, plus the
//! integral-equation residual used as a correctness diagnostic.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::noise::{BrownianGrid, FieldEvaluator, NoiseDriver, StreamKey};
use crate::spectrum::SpectrumSpec;
use crate::System;

/// Position and velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ParticleState {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        ParticleState { x, y }
    }

    pub fn at_rest(x: Vec<f64>) -> Self {
        let d = x.len();
        ParticleState { x, y: vec![0.0; d] }
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    pub epsilon: f64,
    pub gamma: f64,
    /// Prefactor of the particle relaxation time `τ₀ ε^γ`.
    #[serde(default = "defaults::tau0")]
    pub tau0: f64,
    #[serde(default = "defaults::horizon")]
    pub horizon: f64,
    /// The fine step resolves both fast scales by this factor.
    #[serde(default = "defaults::fine_factor")]
    pub fine_factor: f64,
    /// Coarse (output and limit-integrator) step; defaults to the largest
    /// step dividing the horizon with `Δ ≤ ε^{max(γ,2)+1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_dt: Option<f64>,
    /// Moment exponent of the strong error `E sup ‖x − X‖^{2p}`.
    #[serde(default = "defaults::p")]
    pub p: u32,
    #[serde(default)]
    pub seed: u64,
}

pub(crate) mod defaults {
    pub fn tau0() -> f64 {
        1.0
    }
    pub fn horizon() -> f64 {
        1.0
    }
    pub fn fine_factor() -> f64 {
        10.0
    }
    pub fn p() -> u32 {
        1
    }
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            epsilon: 0.1,
            gamma: 1.0,
            tau0: defaults::tau0(),
            horizon: defaults::horizon(),
            fine_factor: defaults::fine_factor(),
            coarse_dt: None,
            p: defaults::p(),
            seed: 0,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(param(name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("epsilon", self.epsilon)?;
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(param("gamma", format!("γ ∈ (0,∞) required, got {}", self.gamma)));
        }
        positive("tau0", self.tau0)?;
        positive("horizon", self.horizon)?;
        positive("fine_factor", self.fine_factor)?;
        if let Some(dt) = self.coarse_dt {
            positive("coarse_dt", dt)?;
        }
        if self.p == 0 {
            return Err(param("p", "moment exponent must be an integer ≥ 1"));
        }
        Ok(())
    }

    /// Particle relaxation time `τ₀ ε^γ`.
    pub fn relaxation_time(&self) -> f64 {
        self.tau0 * self.epsilon.powf(self.gamma)
    }

    /// Default coarse step bound `ε^{max(γ,2)+1}`.
    pub fn coarse_bound(&self) -> f64 {
        self.epsilon.powf(self.gamma.max(2.0) + 1.0)
    }
}

/// Resolved coarse and fine grids. The coarse step divides the horizon and
/// the fine step divides the coarse step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub coarse_dt: f64,
    pub fine_dt: f64,
    pub substeps: usize,
    pub windows: usize,
}

const MAX_FINE_STEPS: f64 = 1e11;

impl TimeGrid {
    /// Fine step `δ = min(ε²/(c α_max), τ₀ε^γ/c, Δ)`, where `α_max` ranges over
    /// modes that carry noise.
    pub fn resolve(params: &SimParams, spectrum: &SpectrumSpec) -> Result<Self> {
        params.validate()?;
        let c = params.fine_factor;
        let coarse_max = params.coarse_dt.unwrap_or_else(|| params.coarse_bound()).min(params.horizon);
        let windows = ceil_count(params.horizon / coarse_max);
        let coarse_dt = params.horizon / windows as f64;

        let alpha_max = spectrum
            .modes()
            .iter()
            .filter(|m| m.lambda > 0.0)
            .map(|m| m.alpha)
            .fold(0.0, f64::max);
        let mut fine_max = (params.relaxation_time() / c).min(coarse_dt);
        if alpha_max > 0.0 {
            fine_max = fine_max.min(params.epsilon * params.epsilon / (c * alpha_max));
        }
        let substeps = ceil_count(coarse_dt / fine_max);
        if windows as f64 * substeps as f64 > MAX_FINE_STEPS {
            return Err(param(
                "coarse_dt",
                format!("grid needs {windows} × {substeps} fine steps, more than {MAX_FINE_STEPS:e}"),
            ));
        }
        Ok(TimeGrid { coarse_dt, fine_dt: coarse_dt / substeps as f64, substeps, windows })
    }

    pub fn fine_steps(&self) -> usize {
        self.windows * self.substeps
    }
}

fn ceil_count(ratio: f64) -> usize {
    // tolerate rounding in ratios that are meant to be integers
    let n = (ratio * (1.0 - 1e-12)).ceil();
    n.max(1.0) as usize
}

/// Above this `δ/m` the velocity relaxes within one step (`e^{−δ/m} < 2·10⁻²²`).
pub const STIFF_THRESHOLD: f64 = 50.0;

/// Precomputed coefficients of the exponential step for fixed `(δ, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpStep {
    pub dt: f64,
    pub relaxation: f64,
    decay: f64,
    memory: f64,
}

impl ExpStep {
    pub fn new(dt: f64, relaxation: f64) -> Self {
        let h = dt / relaxation;
        let (decay, memory) = if h > STIFF_THRESHOLD || !h.is_finite() {
            (0.0, relaxation)
        } else {
            ((-h).exp(), -relaxation * (-h).exp_m1())
        };
        ExpStep { dt, relaxation, decay, memory }
    }

    pub fn is_stiff(&self) -> bool {
        self.decay == 0.0
    }
}

/// One step with frozen forcing `F`:
/// `y ← F + (y − F) e^{−δ/m}`, `x ← x + F δ + (y − F) m (1 − e^{−δ/m})`,
/// exact when `F` is constant over the step. In the stiff branch the
/// velocity snaps to `F` and the `O(m)` memory term is kept.
#[inline]
pub fn langevin_step(state: &mut ParticleState, forcing: &[f64], step: &ExpStep) {
    for ((x, y), f) in state.x.iter_mut().zip(state.y.iter_mut()).zip(forcing) {
        let gap = *y - f;
        *x += f * step.dt + gap * step.memory;
        *y = f + gap * step.decay;
    }
}

/// How the field enters the frozen forcing of a fine step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingRule {
    /// `η` at the left end of the step.
    LeftEndpoint,
    /// The exact average `(1/δ)∫ η ds` over the step, available in closed
    /// form from the OU transition.
    #[default]
    StepAverage,
    /// Step-averaged `η`, with the field evaluated at a predicted midpoint
    /// position. Second order in `δ` for frozen noise.
    Midpoint,
}

/// Fine-step integrator for one path of the full dynamics.
pub struct FullDynamics<'a> {
    system: &'a System,
    field: FieldEvaluator<'a>,
    step: ExpStep,
    inv_eps: f64,
    rule: ForcingRule,
    forcing: Vec<f64>,
    scratch: Vec<f64>,
    midpoint: Vec<f64>,
}

impl<'a> FullDynamics<'a> {
    pub fn new(system: &'a System, params: &SimParams, fine_dt: f64, rule: ForcingRule) -> Self {
        let d = system.dim();
        FullDynamics {
            system,
            field: FieldEvaluator::new(&system.spectrum),
            step: ExpStep::new(fine_dt, params.relaxation_time()),
            inv_eps: 1.0 / params.epsilon,
            rule,
            forcing: vec![0.0; d],
            scratch: vec![0.0; d],
            midpoint: vec![0.0; d],
        }
    }

    /// `H = b(x) + f(x) η / ε`, written into the internal buffer.
    #[inline]
    pub fn forcing(&mut self, x: &[f64], eta: &[f64]) -> &[f64] {
        self.system.drift.eval(x, &mut self.forcing);
        self.field.field(eta, x, &mut self.scratch);
        for (f, v) in self.forcing.iter_mut().zip(&self.scratch) {
            *f += v * self.inv_eps;
        }
        &self.forcing
    }

    /// Advances the particle over the step the driver has just taken.
    #[inline]
    pub fn follow(&mut self, state: &mut ParticleState, driver: &NoiseDriver) {
        let eta = match self.rule {
            ForcingRule::LeftEndpoint => driver.left(),
            ForcingRule::StepAverage | ForcingRule::Midpoint => driver.averages(),
        };
        self.advance(state, eta);
    }

    /// One step with noise coordinates `eta` held fixed over the step.
    #[inline]
    pub fn advance(&mut self, state: &mut ParticleState, eta: &[f64]) {
        self.forcing(&state.x, eta);
        if self.rule == ForcingRule::Midpoint {
            let (dt, memory) = (self.step.dt, self.step.memory);
            for i in 0..state.x.len() {
                let f = self.forcing[i];
                self.midpoint[i] = state.x[i] + 0.5 * (f * dt + (state.y[i] - f) * memory);
            }
            let mid = std::mem::take(&mut self.midpoint);
            self.forcing(&mid, eta);
            self.midpoint = mid;
        }
        langevin_step(state, &self.forcing, &self.step);
    }

    pub fn step(&self) -> &ExpStep {
        &self.step
    }
}

/// Initial position and velocity, independent of the noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    pub x0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<f64>>,
}

impl InitialCondition {
    pub fn at_rest(x0: Vec<f64>) -> Self {
        InitialCondition { x0, y0: None }
    }

    pub fn state(&self) -> ParticleState {
        let y = self.y0.clone().unwrap_or_else(|| vec![0.0; self.x0.len()]);
        ParticleState::new(self.x0.clone(), y)
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.x0.len() != dim || self.y0.as_ref().is_some_and(|y| y.len() != dim) {
            return Err(Error::Configuration(format!("initial condition must be {dim}-dimensional")));
        }
        Ok(())
    }
}

/// Positions (and optionally velocities) on the coarse grid, stored
/// row-major with `dim` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dim: usize,
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn new(dim: usize, with_velocity: bool) -> Self {
        Trajectory { dim, times: Vec::new(), x: Vec::new(), y: with_velocity.then(Vec::new) }
    }

    pub fn push(&mut self, t: f64, state: &ParticleState) {
        self.times.push(t);
        self.x.extend_from_slice(&state.x);
        if let Some(y) = self.y.as_mut() {
            y.extend_from_slice(&state.y);
        }
    }

    pub fn push_position(&mut self, t: f64, x: &[f64]) {
        self.times.push(t);
        self.x.extend_from_slice(x);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }

    pub fn last_position(&self) -> &[f64] {
        self.position(self.len() - 1)
    }

    /// `max_n ‖x_n − other_n‖` over the shared grid.
    pub fn sup_distance(&self, other: &Trajectory) -> Result<f64> {
        if self.len() != other.len() || self.dim != other.dim {
            return Err(Error::GridMismatch(format!(
                "{} × {} samples against {} × {}",
                self.len(),
                self.dim,
                other.len(),
                other.dim
            )));
        }
        Ok((0..self.len())
            .map(|i| distance(self.position(i), other.position(i)))
            .fold(0.0, f64::max))
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Node values on the fine grid kept for the integral-equation residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FineHistory {
    pub dim: usize,
    pub dt: f64,
    pub relaxation: f64,
    pub y0: Vec<f64>,
    /// `x(t_n)`, `n = 0..=N`, row-major.
    pub x: Vec<f64>,
    /// `H(t_n) = b(x_n) + v(x_n, t_n)/ε`, row-major.
    pub forcing: Vec<f64>,
}

impl FineHistory {
    fn new(dim: usize, dt: f64, relaxation: f64, y0: Vec<f64>) -> Self {
        FineHistory { dim, dt, relaxation, y0, x: Vec::new(), forcing: Vec::new() }
    }

    pub fn nodes(&self) -> usize {
        self.x.len() / self.dim
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub forcing: ForcingRule,
    pub record_velocity: bool,
    pub record_increments: bool,
    pub record_history: bool,
}

#[derive(Debug, Clone)]
pub struct FullRun {
    pub grid: TimeGrid,
    pub trajectory: Trajectory,
    pub increments: Option<BrownianGrid>,
    pub history: Option<FineHistory>,
}

/// Simulates one path of the full dynamics from a stationary noise start,
/// recording the coarse grid.
pub fn simulate_full(
    system: &System,
    params: &SimParams,
    init: &InitialCondition,
    key: StreamKey,
    options: RunOptions,
) -> Result<FullRun> {
    init.check(system.dim())?;
    let grid = TimeGrid::resolve(params, &system.spectrum)?;
    let mut driver = NoiseDriver::stationary(&system.spectrum, grid.fine_dt, params.epsilon, key)?;
    let mut dynamics = FullDynamics::new(system, params, grid.fine_dt, options.forcing);
    let mut state = init.state();
    let k = system.spectrum.len();

    let mut trajectory = Trajectory::new(system.dim(), options.record_velocity);
    trajectory.push(0.0, &state);
    let mut increments = options
        .record_increments
        .then(|| BrownianGrid::new(grid.fine_dt, grid.substeps, k, key));
    let mut history = options
        .record_history
        .then(|| FineHistory::new(system.dim(), grid.fine_dt, params.relaxation_time(), state.y.clone()));
    let mut window = vec![0.0; k];

    for n in 0..grid.windows {
        window.fill(0.0);
        for s in 0..grid.substeps {
            driver.advance();
            if let Some(h) = history.as_mut() {
                h.x.extend_from_slice(&state.x);
                let node = dynamics.forcing(&state.x, driver.left());
                h.forcing.extend_from_slice(node);
            }
            dynamics.follow(&mut state, &driver);
            for (a, w) in window.iter_mut().zip(driver.increments()) {
                *a += w;
            }
            if !state.is_finite() {
                let step = n * grid.substeps + s + 1;
                return Err(Error::NonFinite { step, time: step as f64 * grid.fine_dt });
            }
        }
        trajectory.push((n + 1) as f64 * grid.coarse_dt, &state);
        if let Some(g) = increments.as_mut() {
            g.push_window(&window);
        }
    }
    if let Some(h) = history.as_mut() {
        h.x.extend_from_slice(&state.x);
        let node = dynamics.forcing(&state.x, driver.eta());
        h.forcing.extend_from_slice(node);
    }
    Ok(FullRun { grid, trajectory, increments, history })
}

/// Integrates the dynamics with the noise coordinates frozen at `eta` for
/// `steps` fine steps, keeping the full fine history. `LeftEndpoint` and
/// `StepAverage` coincide here.
pub fn simulate_frozen(
    system: &System,
    params: &SimParams,
    eta: &[f64],
    init: &InitialCondition,
    dt: f64,
    steps: usize,
    rule: ForcingRule,
) -> Result<FineHistory> {
    init.check(system.dim())?;
    params.validate()?;
    if eta.len() != system.spectrum.len() {
        return Err(Error::Configuration(format!("expected {} noise coordinates", system.spectrum.len())));
    }
    let mut dynamics = FullDynamics::new(system, params, dt, rule);
    let mut state = init.state();
    let mut history = FineHistory::new(system.dim(), dt, params.relaxation_time(), state.y.clone());
    for n in 0..=steps {
        history.x.extend_from_slice(&state.x);
        let node = dynamics.forcing(&state.x, eta);
        history.forcing.extend_from_slice(node);
        if n < steps {
            dynamics.advance(&mut state, eta);
            if !state.is_finite() {
                return Err(Error::NonFinite { step: n + 1, time: (n + 1) as f64 * dt });
            }
        }
    }
    Ok(history)
}

/// Evaluates the right side of the integral equation
/// `x(t) = x₀ + m y₀ (1 − e^{−t/m}) + ∫₀ᵗ (1 − e^{(s−t)/m}) H(s) ds`
/// by trapezoidal quadrature over the fine nodes, and returns
/// `‖x(t_n) − RHS(t_n)‖` at every `stride`-th node.
pub fn integral_residual_profile(history: &FineHistory, stride: usize) -> Result<Vec<(f64, f64)>> {
    let d = history.dim;
    let nodes = history.nodes();
    if stride == 0 || nodes == 0 || history.forcing.len() != history.x.len() {
        return Err(Error::GridMismatch("history and output stride are inconsistent".into()));
    }
    let (dt, m) = (history.dt, history.relaxation);
    let decay = (-dt / m).exp();
    let x0 = &history.x[..d];
    let mut plain = vec![0.0; d];
    let mut kernel = vec![0.0; d];
    let mut out = Vec::new();
    for n in 0..nodes {
        if n > 0 {
            let prev = &history.forcing[(n - 1) * d..n * d];
            let cur = &history.forcing[n * d..(n + 1) * d];
            for i in 0..d {
                plain[i] += 0.5 * dt * (prev[i] + cur[i]);
                kernel[i] = decay * kernel[i] + 0.5 * dt * (decay * prev[i] + cur[i]);
            }
        }
        if n % stride == 0 {
            let t = n as f64 * dt;
            let memory = -m * (-t / m).exp_m1();
            let x = &history.x[n * d..(n + 1) * d];
            let r: f64 = (0..d)
                .map(|i| {
                    let rhs = x0[i] + history.y0[i] * memory + plain[i] - kernel[i];
                    (x[i] - rhs).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            out.push((t, r));
        }
    }
    Ok(out)
}

/// Sup over the output nodes of the integral-equation residual.
pub fn integral_residual(history: &FineHistory, stride: usize) -> Result<f64> {
    Ok(integral_residual_profile(history, stride)?
        .into_iter()
        .map(|(_, r)| r)
        .fold(0.0, f64::max))
}
