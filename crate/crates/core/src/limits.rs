//! Limiting SDEs for the three regimes, their Euler–Maruyama integrator on
//! the coarse grid, and the μ-weighted Riemann sums interpolating between
//! the Itô and Stratonovich integrals.

use crate::error::{param, Error, Result};
use crate::langevin::{InitialCondition, TimeGrid, Trajectory};
use crate::noise::{BrownianGrid, FieldEvaluator};
use crate::spectrum::{self, DriftCorrection, SpectrumSpec};
use crate::{Regime, System};

/// `B(x) = b(x) + ∇·(f Θ̃ fᵀ)(x) − f(x) Θ̃ (∇·fᵀ)(x)` for a diagonal `Θ̃`.
///
/// Per mode the two terms combine to `θ_k h_k φ_k (h_k · ∇φ_k)`, so the
/// correction is evaluated from analytic gradients.
#[derive(Debug, Clone)]
pub struct LimitDrift<'a> {
    system: &'a System,
    regime: Regime,
    correction: DriftCorrection,
}

pub fn build_drift(system: &System, regime: Regime) -> Result<LimitDrift<'_>> {
    let correction = correction_for(&system.spectrum, regime)?;
    Ok(LimitDrift { system, regime, correction })
}

pub fn correction_for(spectrum: &SpectrumSpec, regime: Regime) -> Result<DriftCorrection> {
    Ok(match regime {
        Regime::Ito => spectrum::zero_correction(spectrum),
        Regime::Stratonovich => spectrum::theta(spectrum),
        Regime::Intermediate { tau0 } => spectrum::theta_hat(spectrum, tau0)?,
    })
}

impl<'a> LimitDrift<'a> {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn weights(&self) -> &DriftCorrection {
        &self.correction
    }

    pub fn system(&self) -> &'a System {
        self.system
    }

    /// Noise-induced part of the drift, written into `out`.
    pub fn correction(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (m, theta) in self.system.spectrum.modes().iter().zip(&self.correction.weights) {
            if *theta == 0.0 {
                continue;
            }
            let (phi, dphi) = m.phi.value_and_directional(x, &m.direction);
            let s = theta * phi * dphi;
            for (o, h) in out.iter_mut().zip(&m.direction) {
                *o += h * s;
            }
        }
    }

    /// Full limiting drift `B(x)`, written into `out`.
    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        self.system.drift.eval(x, out);
        for (m, theta) in self.system.spectrum.modes().iter().zip(&self.correction.weights) {
            if *theta == 0.0 {
                continue;
            }
            let (phi, dphi) = m.phi.value_and_directional(x, &m.direction);
            let s = theta * phi * dphi;
            for (o, h) in out.iter_mut().zip(&m.direction) {
                *o += h * s;
            }
        }
    }
}

/// Euler–Maruyama for `dX = B(X) dt + f(X) A⁻¹ dW` on the coarse grid,
/// driven by the per-window Brownian sums of a coupled full run.
pub fn simulate_limit(drift: &LimitDrift<'_>, increments: &BrownianGrid, grid: &TimeGrid, init: &InitialCondition) -> Result<Trajectory> {
    let system = drift.system();
    init.check(system.dim())?;
    if increments.modes != system.spectrum.len() {
        return Err(Error::GridMismatch(format!(
            "{} increment coordinates for {} modes",
            increments.modes,
            system.spectrum.len()
        )));
    }
    if increments.windows() != grid.windows {
        return Err(Error::GridMismatch(format!(
            "{} increment windows for {} coarse steps",
            increments.windows(),
            grid.windows
        )));
    }
    let mut stepper = EulerMaruyama::new(drift, grid.coarse_dt);
    let dt = grid.coarse_dt;
    let mut x = init.x0.clone();
    let mut path = Trajectory::new(system.dim(), false);
    path.push_position(0.0, &x);
    for n in 0..grid.windows {
        stepper.step(&mut x, increments.window(n));
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: n + 1, time: (n + 1) as f64 * dt });
        }
        path.push_position((n + 1) as f64 * dt, &x);
    }
    Ok(path)
}

/// One Euler–Maruyama step `X ← X + B(X) Δ + f(X) A⁻¹ w` with workspace.
pub struct EulerMaruyama<'d, 'a> {
    drift: &'d LimitDrift<'a>,
    field: FieldEvaluator<'a>,
    dt: f64,
    b: Vec<f64>,
    noise: Vec<f64>,
}

impl<'d, 'a> EulerMaruyama<'d, 'a> {
    pub fn new(drift: &'d LimitDrift<'a>, dt: f64) -> Self {
        let system = drift.system();
        let d = system.dim();
        EulerMaruyama { drift, field: FieldEvaluator::new(&system.spectrum), dt, b: vec![0.0; d], noise: vec![0.0; d] }
    }

    #[inline]
    pub fn step(&mut self, x: &mut [f64], window: &[f64]) {
        self.drift.eval(x, &mut self.b);
        self.field.diffusion(x, window, &mut self.noise);
        for ((xi, b), w) in x.iter_mut().zip(&self.b).zip(&self.noise) {
            *xi += b * self.dt + w;
        }
    }
}

/// `Σ_j (μ f(X_j) + (1 − μ) f(X_{j−1})) (β_j − β_{j−1})` on aligned grids.
pub fn mu_riemann_sum(xs: &[f64], f: impl Fn(f64) -> f64, beta: &[f64], mu: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(param("mu", format!("must lie in [0, 1], got {mu}")));
    }
    if xs.len() != beta.len() || xs.is_empty() {
        return Err(Error::GridMismatch(format!("path of {} nodes against driver of {}", xs.len(), beta.len())));
    }
    let mut sum = 0.0;
    let mut left = f(xs[0]);
    for j in 1..xs.len() {
        let right = f(xs[j]);
        sum += (mu * right + (1.0 - mu) * left) * (beta[j] - beta[j - 1]);
        left = right;
    }
    Ok(sum)
}

/// `Σ_j f(X_{j−1}) (β_j − β_{j−1})`.
pub fn left_endpoint_sum(xs: &[f64], f: impl Fn(f64) -> f64, beta: &[f64]) -> Result<f64> {
    if xs.len() != beta.len() || xs.is_empty() {
        return Err(Error::GridMismatch(format!("path of {} nodes against driver of {}", xs.len(), beta.len())));
    }
    Ok((1..xs.len()).map(|j| f(xs[j - 1]) * (beta[j] - beta[j - 1])).sum())
}

/// `μ = 1 / (2 (1 + τ₀ α))`: the interpolation weight whose Riemann sums
/// produce the intermediate correction.
pub fn mu_from_tau0(alpha: f64, tau0: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(param("alpha", format!("must be positive, got {alpha}")));
    }
    if !(tau0 >= 0.0) {
        return Err(param("tau0", format!("must be ≥ 0, got {tau0}")));
    }
    Ok(0.5 / (1.0 + tau0 * alpha))
}
