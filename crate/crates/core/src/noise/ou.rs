use rand::Rng;
use rand_distr::StandardNormal;

use super::{NoiseState, NoiseStreams};
use crate::error::{param, Result};
use crate::spectrum::SpectrumSpec;

/// Second moments of `(ΔB, I)` over one step, where `ΔB` is the Brownian
/// increment and `I = ∫₀^δ e^{−α(δ−s)/ε²} dB(s)` the stochastic convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCovariances {
    pub var_increment: f64,
    pub var_convolution: f64,
    pub covariance: f64,
    /// `Var I − Cov²/Var ΔB`, computed without cancellation.
    pub residual_variance: f64,
}

/// `Var ΔB = δ`, `Var I = (ε²/2α)(1 − e^{−2αδ/ε²})`,
/// `Cov = (ε²/α)(1 − e^{−αδ/ε²})`.
pub fn step_covariances(alpha: f64, dt: f64, epsilon: f64) -> StepCovariances {
    let scale = epsilon * epsilon / alpha;
    let x = dt / scale;
    let one_minus = -(-x).exp_m1();
    let one_minus_2 = -(-2.0 * x).exp_m1();
    let gap = if x < 1e-2 {
        // series of (1 − e^{−2x})/2 − (1 − e^{−x})²/x
        let poly = 1.0 / 12.0
            + x * (-1.0 / 12.0
                + x * (17.0 / 360.0 + x * (-7.0 / 360.0 + x * (43.0 / 6720.0 - x * 107.0 / 60480.0))));
        x * x * x * poly
    } else {
        0.5 * one_minus_2 - one_minus * one_minus / x
    };
    StepCovariances {
        var_increment: dt,
        var_convolution: 0.5 * scale * one_minus_2,
        covariance: scale * one_minus,
        residual_variance: (scale * gap).max(0.0),
    }
}

#[derive(Debug, Clone, Copy)]
struct ModeStep {
    decay: f64,
    sqrt_dt: f64,
    /// `I = conv_on_b · z₁ + conv_resid · z₂`
    conv_on_b: f64,
    conv_resid: f64,
    noise_scale: f64,
    sqrt_lambda: f64,
    /// Step average of `η`: `avg_eta · (η_n − η_{n+1}) + avg_b · √λ ΔB`.
    avg_eta: f64,
    avg_b: f64,
}

/// Exact one-step transition of all modes for a fixed `(δ, ε)`.
///
/// Each step draws `(ΔB_k, I_k)` jointly Gaussian and sets
/// `η_k ← η_k e^{−α_k δ/ε²} + (√λ_k/ε) I_k`. The Brownian increment
/// `√λ_k ΔB_k` is returned for the coupled limiting dynamics.
#[derive(Debug, Clone)]
pub struct OuStepper {
    modes: Vec<ModeStep>,
    dt: f64,
}

impl OuStepper {
    pub fn new(spectrum: &SpectrumSpec, dt: f64, epsilon: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(param("dt", format!("must be positive, got {dt}")));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(param("epsilon", format!("must be positive, got {epsilon}")));
        }
        let modes = spectrum
            .modes()
            .iter()
            .map(|m| {
                let c = step_covariances(m.alpha, dt, epsilon);
                let rate = m.alpha / (epsilon * epsilon);
                let sqrt_dt = dt.sqrt();
                ModeStep {
                    decay: (-rate * dt).exp(),
                    sqrt_dt,
                    conv_on_b: c.covariance / sqrt_dt,
                    conv_resid: c.residual_variance.sqrt(),
                    noise_scale: m.lambda.sqrt() / epsilon,
                    sqrt_lambda: m.lambda.sqrt(),
                    avg_eta: 1.0 / (rate * dt),
                    avg_b: epsilon / (m.alpha * dt),
                }
            })
            .collect();
        Ok(OuStepper { modes, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Advances every mode, drawing mode `k` from stream `k`. Writes the
    /// scaled Brownian increments `√λ_k ΔB_k` to `increments` and the exact
    /// step averages `(1/δ)∫ η_k ds` to `averages`.
    #[inline]
    pub fn advance(
        &self,
        eta: &mut [f64],
        streams: &mut NoiseStreams,
        increments: &mut [f64],
        averages: &mut [f64],
    ) {
        for (k, m) in self.modes.iter().enumerate() {
            let rng = streams.mode(k);
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let (w, avg) = m.apply(&mut eta[k], z1, z2);
            increments[k] = w;
            averages[k] = avg;
        }
    }

    /// Same transition with a single generator shared by all modes.
    pub fn advance_with<R: Rng + ?Sized>(&self, eta: &mut [f64], rng: &mut R, increments: &mut [f64]) {
        for (k, m) in self.modes.iter().enumerate() {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            increments[k] = m.apply(&mut eta[k], z1, z2).0;
        }
    }
}

impl ModeStep {
    #[inline(always)]
    fn apply(&self, eta: &mut f64, z1: f64, z2: f64) -> (f64, f64) {
        let db = self.sqrt_dt * z1;
        let conv = self.conv_on_b * z1 + self.conv_resid * z2;
        let old = *eta;
        let new = self.decay * old + self.noise_scale * conv;
        *eta = new;
        let w = self.sqrt_lambda * db;
        // ∫η ds = (ε²/α)(η_n − η_{n+1}) + (ε/α) √λ ΔB
        let avg = if self.avg_eta.is_finite() {
            self.avg_eta * (old - new) + self.avg_b * w
        } else {
            old
        };
        (w, avg)
    }
}

/// One exact step from `state`, returning the new state and the scaled
/// Brownian increments `√λ_k ΔB_k`.
pub fn ou_step<R: Rng + ?Sized>(
    state: &NoiseState,
    dt: f64,
    epsilon: f64,
    spectrum: &SpectrumSpec,
    rng: &mut R,
) -> Result<(NoiseState, Vec<f64>)> {
    let stepper = OuStepper::new(spectrum, dt, epsilon)?;
    let mut eta = state.eta.clone();
    let mut inc = vec![0.0; eta.len()];
    stepper.advance_with(&mut eta, rng, &mut inc);
    Ok((NoiseState { eta, time: state.time + dt }, inc))
}
