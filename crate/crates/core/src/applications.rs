//! The two worked systems: inertial particles in a random incompressible
//! flow on the 2-torus, and a particle in a noisy periodic potential.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::spectrum::{Eigenfunction, ModeIndex, ModeSpec, PowerLaw, SpectrumSpec, TorusPart};
use crate::{BaseDrift, Regime, System};

/// Intensity `λ_k` as a function of the lattice index `n`, `k = 2πn`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmplitudeLaw {
    Flat { lambda: f64 },
    /// `λ = lambda0 · |n|^{−decay}`.
    Power { lambda0: f64, decay: f64 },
}

impl AmplitudeLaw {
    pub fn intensity(&self, norm: f64) -> f64 {
        match *self {
            AmplitudeLaw::Flat { lambda } => lambda,
            AmplitudeLaw::Power { lambda0, decay } => lambda0 * norm.powf(-decay),
        }
    }

    fn decay(&self) -> f64 {
        match *self {
            AmplitudeLaw::Flat { .. } => 0.0,
            AmplitudeLaw::Power { decay, .. } => decay,
        }
    }

    fn validate(&self) -> Result<()> {
        let (scale, decay) = match *self {
            AmplitudeLaw::Flat { lambda } => (lambda, 0.0),
            AmplitudeLaw::Power { lambda0, decay } => (lambda0, decay),
        };
        if !(scale.is_finite() && scale >= 0.0 && decay.is_finite()) {
            return Err(param("amplitude", format!("invalid law {self:?}")));
        }
        Ok(())
    }
}

/// Realified Kraichnan-type field on `T² = R²/Z²`.
///
/// Each conjugate pair `{k, −k}` contributes the real modes `−2 sin(k·x)`
/// and `−2 cos(k·x)` with direction `k^⊥ = (−k₂, k₁)`, rate `α = |k|²` and
/// intensity `λ_k` per coordinate. With `η_k = u + i w` this reproduces
/// `Σ_k i k^⊥ e^{ik·x} η_k` for conjugate-symmetric coefficients.
#[derive(Debug, Clone)]
pub struct TorusSystem {
    pub system: System,
    pub law: AmplitudeLaw,
    /// One lattice representative `n` per conjugate pair.
    pub pairs: Vec<[i64; 2]>,
}

/// All `k ∈ 2πZ² ∖ {0}` with `|k| ≤ k_max`.
pub fn inertial_system(k_max: f64, law: AmplitudeLaw) -> Result<TorusSystem> {
    law.validate()?;
    let r = (k_max / TAU).floor() as i64;
    let mut pairs = Vec::new();
    for n1 in 0..=r {
        for n2 in -r..=r {
            let upper = n1 > 0 || n2 > 0;
            let k2 = (TAU * TAU) * (n1 * n1 + n2 * n2) as f64;
            if upper && k2.sqrt() <= k_max * (1.0 + 1e-12) {
                pairs.push([n1, n2]);
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::Spectrum(format!("no wavevector with |k| ≤ {k_max}")));
    }
    pairs.sort_by_key(|n| (n[0] * n[0] + n[1] * n[1], n[0], n[1]));
    let mut modes = Vec::with_capacity(2 * pairs.len());
    for n in &pairs {
        let k = [TAU * n[0] as f64, TAU * n[1] as f64];
        let alpha = k[0] * k[0] + k[1] * k[1];
        let lambda = law.intensity(((n[0] * n[0] + n[1] * n[1]) as f64).sqrt());
        let perp = vec![-k[1], k[0]];
        for part in [TorusPart::Sin, TorusPart::Cos] {
            let phi = match part {
                TorusPart::Sin => Eigenfunction::Sine { wavevector: k.to_vec(), amplitude: -2.0 },
                TorusPart::Cos => Eigenfunction::Cosine { wavevector: k.to_vec(), amplitude: -2.0 },
            };
            modes.push(ModeSpec::new(ModeIndex::Torus { n: *n, part }, alpha, lambda, perp.clone(), phi));
        }
    }
    let spectrum = SpectrumSpec::with_floor(2, modes, TAU * TAU)?
        .with_exponents(PowerLaw::trigonometric(law.decay(), 2.0, 0.5, 2));
    Ok(TorusSystem { system: System::new(BaseDrift::Zero, spectrum)?, law, pairs })
}

/// Effective diffusivities of the limits: `σ = Σ_{k∈K} λ_k/(2|k|²)` and
/// `σ̂ = Σ_{k∈K} λ_k/(2|k|²(1 + τ₀|k|²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KuboSigma {
    pub sigma: f64,
    pub sigma_hat: f64,
}

pub fn kubo_sigma(torus: &TorusSystem, tau0: f64) -> Result<KuboSigma> {
    if !(tau0.is_finite() && tau0 >= 0.0) {
        return Err(param("tau0", format!("must be ≥ 0, got {tau0}")));
    }
    // the realified modes are in one-to-one correspondence with K
    let (mut sigma, mut sigma_hat) = (0.0, 0.0);
    for m in torus.system.spectrum.modes() {
        sigma += m.lambda / (2.0 * m.alpha);
        sigma_hat += m.lambda / (2.0 * m.alpha * (1.0 + tau0 * m.alpha));
    }
    Ok(KuboSigma { sigma, sigma_hat })
}

/// A particle in the potential `V(x, t) = V₀(x) − (1/ε) Σ_j cos(jx)/j · η_j(t)`
/// with `V₀′(x) = −Σ_j μ⁰_j sin(jx)`, so both the mean force and the noise
/// use the `sin(jx)` basis.
#[derive(Debug, Clone)]
pub struct SolidsSystem {
    pub system: System,
    pub mu0: Vec<f64>,
    pub lambdas: Vec<f64>,
}

pub fn solids_system(mu0: Vec<f64>, lambdas: Vec<f64>) -> Result<SolidsSystem> {
    if mu0.len() != lambdas.len() {
        return Err(Error::Configuration(format!(
            "{} mean coefficients against {} noise intensities",
            mu0.len(),
            lambdas.len()
        )));
    }
    if lambdas.is_empty() {
        return Err(Error::Spectrum("at least one mode is required".into()));
    }
    if let Some(bad) = mu0.iter().chain(&lambdas).find(|v| !v.is_finite()) {
        return Err(param("solids", format!("non-finite coefficient {bad}")));
    }
    let modes = lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let j = i + 1;
            ModeSpec::new(ModeIndex::Scalar(j), (j * j) as f64, lambda, vec![1.0], Eigenfunction::unit_sine(j))
        })
        .collect();
    let spectrum = SpectrumSpec::new(1, modes)?;
    let drift = if mu0.iter().all(|c| *c == 0.0) {
        BaseDrift::Zero
    } else {
        BaseDrift::SineSeries { coefficients: mu0.clone() }
    };
    Ok(SolidsSystem { system: System::new(drift, spectrum)?, mu0, lambdas })
}

/// `λ_j = lambda0 · j^{−decay}` for `j = 1..=modes`, with power-law metadata.
pub fn solids_power_law(mu0: Vec<f64>, lambda0: f64, decay: f64, modes: usize) -> Result<SolidsSystem> {
    let lambdas = (1..=modes).map(|j| lambda0 * (j as f64).powf(-decay)).collect();
    let mut s = solids_system(mu0, lambdas)?;
    s.system.spectrum = s.system.spectrum.with_exponents(PowerLaw::trigonometric(decay, 2.0, 0.0, 1));
    Ok(s)
}

impl SolidsSystem {
    /// `−V₀′(x) = Σ_j μ⁰_j sin(jx)`.
    pub fn mean_force(&self, x: f64) -> f64 {
        self.mu0
            .iter()
            .enumerate()
            .map(|(i, c)| c * ((i + 1) as f64 * x).sin())
            .sum()
    }

    /// Closed-form noise-induced drift of each regime:
    /// `0`, `(1/4) Σ λ_j/(j³(1+τ₀j²)) sin(2jx)` and `(1/4) Σ λ_j/j³ sin(2jx)`.
    pub fn reference_correction(&self, regime: Regime, x: f64) -> f64 {
        let tau0 = match regime {
            Regime::Ito => return 0.0,
            Regime::Intermediate { tau0 } => tau0,
            Regime::Stratonovich => 0.0,
        };
        self.lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let j = (i + 1) as f64;
                0.25 * l / (j * j * j * (1.0 + tau0 * j * j)) * (2.0 * j * x).sin()
            })
            .sum()
    }

    pub fn reference_drift(&self, regime: Regime, x: f64) -> f64 {
        self.mean_force(x) + self.reference_correction(regime, x)
    }

    /// Per-mode diffusion coefficients `√λ_j / j² · sin(jx)`, shared by all
    /// three regimes.
    pub fn diffusion_coefficients(&self, x: f64) -> Vec<f64> {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let j = (i + 1) as f64;
                l.sqrt() / (j * j) * (j * x).sin()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::build_drift;
    use crate::noise::{diffusion_map, eval_field, FieldEvaluator};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn torus() -> TorusSystem {
        inertial_system(TAU * 2.0, AmplitudeLaw::Power { lambda0: 1.0, decay: 3.0 }).unwrap()
    }

    #[test]
    fn shells_and_pairs() {
        let t = inertial_system(TAU, AmplitudeLaw::Flat { lambda: 1.0 }).unwrap();
        assert_eq!(t.pairs, vec![[0, 1], [1, 0]]);
        assert_eq!(t.system.spectrum.len(), 4);
        // |n|² ∈ {1, 2, 4}
        assert_eq!(torus().pairs.len(), 2 + 2 + 2);
        assert!(inertial_system(1.0, AmplitudeLaw::Flat { lambda: 1.0 }).is_err());
    }

    #[test]
    fn single_shell_sigma() {
        let t = inertial_system(TAU, AmplitudeLaw::Flat { lambda: 1.0 }).unwrap();
        let k = kubo_sigma(&t, 1.0).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((k.sigma - 4.0 / (8.0 * pi2)).abs() < 1e-15);
        assert!(k.sigma_hat < k.sigma);
        assert!((k.sigma_hat - 4.0 / (8.0 * pi2 * (1.0 + 4.0 * pi2))).abs() < 1e-15);
    }

    fn complex_field(t: &TorusSystem, x: [f64; 2], eta: &[Complex64]) -> [Complex64; 2] {
        let mut v = [Complex64::new(0.0, 0.0); 2];
        for (n, e) in t.pairs.iter().zip(eta) {
            for (sign, coeff) in [(1.0, *e), (-1.0, e.conj())] {
                let k = [sign * TAU * n[0] as f64, sign * TAU * n[1] as f64];
                let phase = Complex64::new(0.0, k[0] * x[0] + k[1] * x[1]).exp();
                let perp = [-k[1], k[0]];
                for i in 0..2 {
                    v[i] += Complex64::i() * perp[i] * phase * coeff;
                }
            }
        }
        v
    }

    proptest! {
        #[test]
        fn realified_field_matches_complex_sum(
            x in prop::array::uniform2(-1.0f64..1.0),
            coeffs in prop::collection::vec(-2.0f64..2.0, 12),
        ) {
            let t = torus();
            let eta: Vec<Complex64> = coeffs.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            let reference = complex_field(&t, x, &eta);
            // real coordinates ordered (sin ↔ u, cos ↔ w) per pair
            let v = eval_field(&t.system.spectrum, &coeffs, &x);
            for i in 0..2 {
                prop_assert!(reference[i].im.abs() <= 1e-12);
                prop_assert!((reference[i].re - v[i]).abs() <= 1e-12 * (1.0 + v[i].abs()));
            }
        }

        #[test]
        fn field_is_divergence_free(
            x in prop::array::uniform2(-1.0f64..1.0),
            eta in prop::collection::vec(-2.0f64..2.0, 12),
        ) {
            let t = torus();
            let div = FieldEvaluator::new(&t.system.spectrum).divergence(&eta, &x);
            prop_assert!(div.abs() <= 1e-12);
        }

        #[test]
        fn covariance_is_isotropic(x in prop::array::uniform2(-1.0f64..1.0)) {
            let t = torus();
            let spec = &t.system.spectrum;
            let theta = crate::spectrum::theta(spec);
            let mut m = [[0.0; 2]; 2];
            for (md, w) in spec.modes().iter().zip(&theta.weights) {
                let p = md.phi.value(&x);
                for i in 0..2 {
                    for j in 0..2 {
                        m[i][j] += w * p * p * md.direction[i] * md.direction[j];
                    }
                }
            }
            let sigma = kubo_sigma(&t, 1.0).unwrap().sigma;
            prop_assert!((m[0][0] - sigma).abs() <= 1e-12);
            prop_assert!((m[1][1] - sigma).abs() <= 1e-12);
            prop_assert!(m[0][1].abs() <= 1e-12);
            prop_assert!(((m[0][0] + m[1][1]) / 2.0 - sigma).abs() <= 1e-12);
        }

        #[test]
        fn torus_corrections_vanish(x in prop::array::uniform2(-1.0f64..1.0), tau0 in 0.0f64..3.0) {
            let t = torus();
            for regime in [Regime::Ito, Regime::Intermediate { tau0 }, Regime::Stratonovich] {
                let d = build_drift(&t.system, regime).unwrap();
                let mut out = [1.0; 2];
                d.eval(&x, &mut out);
                prop_assert!(out[0].abs() <= 1e-12 && out[1].abs() <= 1e-12);
            }
        }

        #[test]
        fn solids_drifts_match_closed_forms(
            x in -7.0f64..7.0,
            lambdas in prop::collection::vec(0.0f64..2.0, 1..9),
            tau0 in 0.0f64..3.0,
        ) {
            let mu0: Vec<f64> = (0..lambdas.len()).map(|j| 0.3 / (j + 1) as f64).collect();
            let s = solids_system(mu0, lambdas).unwrap();
            for regime in [Regime::Ito, Regime::Intermediate { tau0 }, Regime::Stratonovich] {
                let d = build_drift(&s.system, regime).unwrap();
                let mut out = [0.0];
                d.eval(&[x], &mut out);
                prop_assert!((out[0] - s.reference_drift(regime, x)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_intermediate_prefactor() {
        let s = solids_system(vec![0.0], vec![1.0]).unwrap();
        for x in [0.1, 0.7, 2.0] {
            let c = s.reference_correction(Regime::Intermediate { tau0: 1.0 }, x);
            assert!((c - (2.0 * x).sin() / 8.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mean_force_and_zero_drift() {
        let s = solids_system(vec![0.0, 0.0], vec![1.0, 0.5]).unwrap();
        assert!(s.system.drift.is_zero());
        let s = solids_system(vec![0.5, -0.2], vec![1.0, 0.5]).unwrap();
        let mut out = [0.0];
        for x in [0.3, 1.9] {
            s.system.drift.eval(&[x], &mut out);
            assert_eq!(out[0], s.mean_force(x));
            let d = build_drift(&s.system, Regime::Ito).unwrap();
            d.eval(&[x], &mut out);
            assert_eq!(out[0], s.mean_force(x));
        }
        assert!(solids_system(vec![0.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn diffusion_coefficients_match_map() {
        let s = solids_system(vec![0.0; 3], vec![1.0, 0.5, 0.25]).unwrap();
        let x = 0.9;
        let w = [0.3, -1.2, 0.7];
        let via_map = diffusion_map(&s.system.spectrum, &[x], &w)[0];
        let coeffs = s.diffusion_coefficients(x);
        let direct: f64 = coeffs.iter().zip(&w).zip(&s.lambdas).map(|((c, w), l)| c * w / l.sqrt()).sum();
        assert!((via_map - direct).abs() < 1e-15);
    }
}
