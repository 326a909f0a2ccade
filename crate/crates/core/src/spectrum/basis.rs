//! Scalar eigenfunctions `φ_k` with analytic derivatives.

use serde::{Deserialize, Serialize};

/// A scalar eigenfunction in one of the supported trigonometric families.
///
/// `Sine` and `Cosine` are `a · sin(k·x)` and `a · cos(k·x)` for a wavevector
/// `k` of the same dimension as `x`. The amplitude carries the normalization
/// of the basis, see the named constructors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenfunction {
    Constant { value: f64 },
    Sine { wavevector: Vec<f64>, amplitude: f64 },
    Cosine { wavevector: Vec<f64>, amplitude: f64 },
}

impl Eigenfunction {
    /// `√(2/L) sin(jπx/L)`, unit `L²(0, L)` norm (Dirichlet Laplacian).
    pub fn dirichlet_sine(j: usize, length: f64) -> Self {
        Eigenfunction::Sine {
            wavevector: vec![j as f64 * std::f64::consts::PI / length],
            amplitude: (2.0 / length).sqrt(),
        }
    }

    /// `√(2/L) cos(jπx/L)`, unit `L²(0, L)` norm for `j ≥ 1` (Neumann Laplacian).
    pub fn neumann_cosine(j: usize, length: f64) -> Self {
        Eigenfunction::Cosine {
            wavevector: vec![j as f64 * std::f64::consts::PI / length],
            amplitude: (2.0 / length).sqrt(),
        }
    }

    /// `sin(j x)` with unit amplitude, the potential-noise basis on the line.
    pub fn unit_sine(j: usize) -> Self {
        Eigenfunction::Sine {
            wavevector: vec![j as f64],
            amplitude: 1.0,
        }
    }

    /// Dimension fixed by the wavevector, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Eigenfunction::Constant { .. } => None,
            Eigenfunction::Sine { wavevector, .. } | Eigenfunction::Cosine { wavevector, .. } => {
                Some(wavevector.len())
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Eigenfunction::Constant { value } => *value,
            Eigenfunction::Sine { wavevector, amplitude } => amplitude * dot(wavevector, x).sin(),
            Eigenfunction::Cosine { wavevector, amplitude } => amplitude * dot(wavevector, x).cos(),
        }
    }

    /// Returns `φ(x)` and writes `∇φ(x)` into `grad`.
    #[inline]
    pub fn value_and_gradient(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        match self {
            Eigenfunction::Constant { value } => {
                grad.fill(0.0);
                *value
            }
            Eigenfunction::Sine { wavevector, amplitude } => {
                let (s, c) = dot(wavevector, x).sin_cos();
                for (g, k) in grad.iter_mut().zip(wavevector) {
                    *g = amplitude * k * c;
                }
                amplitude * s
            }
            Eigenfunction::Cosine { wavevector, amplitude } => {
                let (s, c) = dot(wavevector, x).sin_cos();
                for (g, k) in grad.iter_mut().zip(wavevector) {
                    *g = -amplitude * k * s;
                }
                amplitude * c
            }
        }
    }

    /// Returns `φ(x)` and the directional derivative `h · ∇φ(x)`.
    #[inline]
    pub fn value_and_directional(&self, x: &[f64], h: &[f64]) -> (f64, f64) {
        match self {
            Eigenfunction::Constant { value } => (*value, 0.0),
            Eigenfunction::Sine { wavevector, amplitude } => {
                let (s, c) = dot(wavevector, x).sin_cos();
                (amplitude * s, amplitude * c * dot(wavevector, h))
            }
            Eigenfunction::Cosine { wavevector, amplitude } => {
                let (s, c) = dot(wavevector, x).sin_cos();
                (amplitude * c, -amplitude * s * dot(wavevector, h))
            }
        }
    }

    /// Writes the Hessian, row-major `d × d`, into `out`.
    pub fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = x.len();
        match self {
            Eigenfunction::Constant { .. } => out.fill(0.0),
            Eigenfunction::Sine { wavevector, .. } | Eigenfunction::Cosine { wavevector, .. } => {
                // both families satisfy ∂ᵢ∂ⱼφ = −kᵢkⱼ φ
                let v = self.value(x);
                for i in 0..d {
                    for j in 0..d {
                        out[i * d + j] = -wavevector[i] * wavevector[j] * v;
                    }
                }
            }
        }
    }

    /// Wavevector norm `|k|`; `‖Dⁿφ‖∞ = |a| |k|ⁿ` for the trigonometric families.
    pub fn frequency(&self) -> f64 {
        match self {
            Eigenfunction::Constant { .. } => 0.0,
            Eigenfunction::Sine { wavevector, .. } | Eigenfunction::Cosine { wavevector, .. } => {
                dot(wavevector, wavevector).sqrt()
            }
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
