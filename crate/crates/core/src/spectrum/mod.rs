//! Spectral description of the noise field: the modes `f_k = h_k φ_k` with
//! rates `α_k` and intensities `λ_k`, the diagonal drift-correction operators
//! built from them, and the summability checker for power-law families.

mod basis;
mod conditions;

pub use basis::Eigenfunction;
pub use conditions::{check_conditions, ConditionEntry, ConditionReport, PowerLaw, Verdict};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Label of a mode: a scalar index or a realified lattice wavevector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeIndex {
    Scalar(usize),
    /// Integer lattice vector `n` (wavevector `2πn`), cosine or sine part.
    Torus { n: [i64; 2], part: TorusPart },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusPart {
    Cos,
    Sin,
}

/// One mode `f_k = h_k φ_k` of the field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub index: ModeIndex,
    /// Decay rate, eigenvalue of `A`.
    pub alpha: f64,
    /// Noise intensity, eigenvalue of `Q`.
    pub lambda: f64,
    /// Direction vector `h_k ∈ R^d`.
    pub direction: Vec<f64>,
    pub phi: Eigenfunction,
}

impl ModeSpec {
    pub fn new(index: ModeIndex, alpha: f64, lambda: f64, direction: Vec<f64>, phi: Eigenfunction) -> Self {
        ModeSpec { index, alpha, lambda, direction, phi }
    }

    /// Stationary variance `λ/(2α)` of the mode coordinate.
    pub fn stationary_variance(&self) -> f64 {
        self.lambda / (2.0 * self.alpha)
    }
}

/// A truncated spectrum of `K` modes sorted by nondecreasing `α_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    modes: Vec<ModeSpec>,
    dim: usize,
    floor: f64,
    exponents: Option<PowerLaw>,
}

impl SpectrumSpec {
    /// Validates and builds a spectrum. The spectral floor `ω` defaults to the
    /// smallest `α_k`.
    pub fn new(dim: usize, modes: Vec<ModeSpec>) -> Result<Self> {
        let floor = modes.first().map(|m| m.alpha).unwrap_or(0.0);
        Self::with_floor(dim, modes, floor)
    }

    pub fn with_floor(dim: usize, modes: Vec<ModeSpec>, floor: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Spectrum("domain dimension must be at least 1".into()));
        }
        if modes.is_empty() {
            return Err(Error::Spectrum("at least one mode is required".into()));
        }
        if !(floor.is_finite() && floor > 0.0) {
            return Err(Error::Spectrum(format!("spectral floor must be positive, got {floor}")));
        }
        for (k, m) in modes.iter().enumerate() {
            if !(m.alpha.is_finite() && m.alpha >= floor) {
                return Err(Error::Spectrum(format!(
                    "mode {k}: alpha {} below floor {floor}",
                    m.alpha
                )));
            }
            if !(m.lambda.is_finite() && m.lambda >= 0.0) {
                return Err(Error::Spectrum(format!("mode {k}: lambda must be ≥ 0, got {}", m.lambda)));
            }
            if m.direction.len() != dim || m.direction.iter().any(|h| !h.is_finite()) {
                return Err(Error::Spectrum(format!("mode {k}: direction must be a finite {dim}-vector")));
            }
            if let Some(pd) = m.phi.dim() {
                if pd != dim {
                    return Err(Error::Spectrum(format!(
                        "mode {k}: eigenfunction acts on R^{pd}, domain is R^{dim}"
                    )));
                }
            }
        }
        if modes.windows(2).any(|w| w[1].alpha < w[0].alpha) {
            return Err(Error::Spectrum("modes must be sorted by nondecreasing alpha".into()));
        }
        Ok(SpectrumSpec { modes, dim, floor, exponents: None })
    }

    /// A spectrum with no modes carrying noise, useful as a deterministic
    /// baseline: one constant mode with `λ = 0`.
    pub fn silent(dim: usize) -> Self {
        let mode = ModeSpec::new(
            ModeIndex::Scalar(1),
            1.0,
            0.0,
            vec![0.0; dim],
            Eigenfunction::Constant { value: 0.0 },
        );
        SpectrumSpec { modes: vec![mode], dim, floor: 1.0, exponents: None }
    }

    pub fn with_exponents(mut self, exponents: PowerLaw) -> Self {
        self.exponents = Some(exponents);
        self
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn alpha_max(&self) -> f64 {
        self.modes.iter().map(|m| m.alpha).fold(0.0, f64::max)
    }

    pub fn exponents(&self) -> Option<&PowerLaw> {
        self.exponents.as_ref()
    }

    /// `Σ λ_k / (2 α_k)`, the stationary field variance budget.
    pub fn trace(&self) -> f64 {
        self.modes.iter().map(ModeSpec::stationary_variance).sum()
    }
}

/// Which diagonal weight family a correction operator uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CorrectionKind {
    Zero,
    Theta,
    ThetaHat { tau0: f64 },
}

/// Diagonal operator `Θ̃ = diag(θ_k)` weighting the noise-induced drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftCorrection {
    pub weights: Vec<f64>,
    pub kind: CorrectionKind,
}

impl DriftCorrection {
    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| *w == 0.0)
    }
}

pub fn zero_correction(spectrum: &SpectrumSpec) -> DriftCorrection {
    DriftCorrection { weights: vec![0.0; spectrum.len()], kind: CorrectionKind::Zero }
}

/// `Θ = diag(λ_k / (2 α_k²))`.
pub fn theta(spectrum: &SpectrumSpec) -> DriftCorrection {
    let weights = spectrum
        .modes()
        .iter()
        .map(|m| m.lambda / (2.0 * m.alpha * m.alpha))
        .collect();
    DriftCorrection { weights, kind: CorrectionKind::Theta }
}

/// `Θ̂(τ₀) = diag(λ_k / (2 α_k² (1 + τ₀ α_k)))`.
pub fn theta_hat(spectrum: &SpectrumSpec, tau0: f64) -> Result<DriftCorrection> {
    if !(tau0.is_finite() && tau0 >= 0.0) {
        return Err(param("tau0", format!("must be ≥ 0, got {tau0}")));
    }
    let weights = spectrum
        .modes()
        .iter()
        .map(|m| m.lambda / (2.0 * m.alpha * m.alpha * (1.0 + tau0 * m.alpha)))
        .collect();
    Ok(DriftCorrection { weights, kind: CorrectionKind::ThetaHat { tau0 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_mode(alpha: f64, lambda: f64) -> SpectrumSpec {
        SpectrumSpec::new(
            1,
            vec![ModeSpec::new(ModeIndex::Scalar(1), alpha, lambda, vec![1.0], Eigenfunction::unit_sine(1))],
        )
        .unwrap()
    }

    fn spectrum_from(pairs: &[(f64, f64)]) -> SpectrumSpec {
        let mut pairs = pairs.to_vec();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let modes = pairs
            .iter()
            .enumerate()
            .map(|(k, &(a, l))| ModeSpec::new(ModeIndex::Scalar(k + 1), a, l, vec![1.0], Eigenfunction::unit_sine(k + 1)))
            .collect();
        SpectrumSpec::new(1, modes).unwrap()
    }

    #[test]
    fn theta_single_mode_values() {
        assert_eq!(theta(&one_mode(1.0, 1.0)).weights, vec![0.5]);
        assert_eq!(theta(&one_mode(2.0, 1.0)).weights, vec![0.125]);
    }

    #[test]
    fn theta_on_first_torus_lattice_point() {
        // α = |k|², λ = |k|^{-4} at k = (1, 0)
        let k2: f64 = 1.0;
        let w = theta(&one_mode(k2, k2.powi(-2))).weights[0];
        assert_eq!(w, 0.5);
    }

    #[test]
    fn theta_hat_values() {
        let s = one_mode(1.0, 1.0);
        assert_eq!(theta_hat(&s, 1.0).unwrap().weights, vec![0.25]);
        assert_eq!(theta_hat(&s, 0.0).unwrap().weights, theta(&s).weights);
        assert!(theta_hat(&s, 1e6).unwrap().weights[0] <= 1e-6);
        assert!(theta_hat(&s, -0.1).is_err());
    }

    #[test]
    fn rejects_unsorted_and_below_floor() {
        let m = |a| ModeSpec::new(ModeIndex::Scalar(1), a, 1.0, vec![1.0], Eigenfunction::unit_sine(1));
        assert!(SpectrumSpec::new(1, vec![m(2.0), m(1.0)]).is_err());
        assert!(SpectrumSpec::with_floor(1, vec![m(0.5)], 1.0).is_err());
        assert!(SpectrumSpec::new(1, vec![]).is_err());
        assert!(SpectrumSpec::new(2, vec![m(1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn theta_hat_bounded_by_theta(
            pairs in prop::collection::vec((0.1f64..50.0, 1e-3f64..10.0), 1..8),
            tau0 in 0.0f64..100.0,
        ) {
            let s = spectrum_from(&pairs);
            let t = theta(&s);
            let th = theta_hat(&s, tau0).unwrap();
            for (a, b) in th.weights.iter().zip(&t.weights) {
                prop_assert!(*a >= 0.0 && a <= b);
                if tau0 > 0.0 {
                    prop_assert!(a < b);
                } else {
                    prop_assert_eq!(a, b);
                }
            }
        }

        #[test]
        fn weights_invariant_under_joint_rescaling(
            alpha in 0.1f64..20.0,
            lambda in 1e-3f64..10.0,
            tau0 in 0.0f64..10.0,
            c in 0.25f64..4.0,
        ) {
            // α → cα, λ → c²λ keeps λ/α² fixed; τ₀ → τ₀/c keeps τ₀α fixed.
            let base = theta_hat(&one_mode(alpha, lambda), tau0).unwrap().weights[0];
            let scaled = theta_hat(&one_mode(c * alpha, c * c * lambda), tau0 / c).unwrap().weights[0];
            prop_assert!((base - scaled).abs() <= 1e-12 * base.max(1e-300));
            let t0 = theta(&one_mode(alpha, lambda)).weights[0];
            let t1 = theta(&one_mode(c * alpha, c * c * lambda)).weights[0];
            prop_assert!((t0 - t1).abs() <= 1e-12 * t0);
            if tau0 > 0.1 && (c - 1.0).abs() > 0.05 {
                let unmatched = theta_hat(&one_mode(c * alpha, c * c * lambda), tau0).unwrap().weights[0];
                prop_assert!((unmatched - base).abs() > 1e-9 * base);
            }
        }
    }
}
