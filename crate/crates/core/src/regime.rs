use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Which white-noise limit applies, decided by the ratio of the particle and
/// noise relaxation times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `γ < 2`: no drift correction.
    Ito,
    /// `γ = 2`: correction weighted by `Θ̂(τ₀)`.
    Intermediate { tau0: f64 },
    /// `γ > 2`: the Stratonovich correction weighted by `Θ`.
    Stratonovich,
}

impl Regime {
    /// Selects the regime for a time-scale exponent. The comparison with 2 is
    /// exact: the limit is discontinuous there, so `γ = 2` has to be given as
    /// exactly `2.0`.
    pub fn from_gamma(gamma: f64, tau0: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(param("gamma", format!("γ ∈ (0,∞) required, got {gamma}")));
        }
        if !(tau0.is_finite() && tau0 >= 0.0) {
            return Err(param("tau0", format!("τ₀ ≥ 0 required, got {tau0}")));
        }
        Ok(if gamma < 2.0 {
            Regime::Ito
        } else if gamma == 2.0 {
            Regime::Intermediate { tau0 }
        } else {
            Regime::Stratonovich
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Ito => "ito",
            Regime::Intermediate { .. } => "intermediate",
            Regime::Stratonovich => "stratonovich",
        }
    }

    /// True for the regimes whose well-posedness needs the stronger
    /// (third-derivative) summability conditions.
    pub fn needs_strong_conditions(&self) -> bool {
        !matches!(self, Regime::Ito)
    }
}
