use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectrum::SpectrumSpec;

type DriftFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// The deterministic force `b(x)`. Must be Lipschitz for the limits to hold.
#[derive(Clone)]
pub enum BaseDrift {
    Zero,
    /// `b(x) = −rate · x`.
    Linear { rate: f64 },
    /// One-dimensional `b(x) = Σ_j c_j sin(j x)`, with `j` starting at 1.
    SineSeries { coefficients: Vec<f64> },
    Custom(Arc<DriftFn>),
}

impl BaseDrift {
    pub fn custom(f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static) -> Self {
        BaseDrift::Custom(Arc::new(f))
    }

    /// Writes `b(x)` into `out` (overwriting it).
    pub fn eval(&self, x: &[f64], out: &mut [f64]) {
        match self {
            BaseDrift::Zero => out.fill(0.0),
            BaseDrift::Linear { rate } => {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = -rate * xi;
                }
            }
            BaseDrift::SineSeries { coefficients } => {
                out[0] = coefficients
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * ((j + 1) as f64 * x[0]).sin())
                    .sum();
            }
            BaseDrift::Custom(f) => f(x, out),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BaseDrift::Zero => true,
            BaseDrift::Linear { rate } => *rate == 0.0,
            BaseDrift::SineSeries { coefficients } => coefficients.iter().all(|c| *c == 0.0),
            BaseDrift::Custom(_) => false,
        }
    }
}

impl fmt::Debug for BaseDrift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDrift::Zero => write!(f, "Zero"),
            BaseDrift::Linear { rate } => f.debug_struct("Linear").field("rate", rate).finish(),
            BaseDrift::SineSeries { coefficients } => f
                .debug_struct("SineSeries")
                .field("coefficients", coefficients)
                .finish(),
            BaseDrift::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// A base drift together with the spectral description of the noise field.
#[derive(Debug, Clone)]
pub struct System {
    pub drift: BaseDrift,
    pub spectrum: SpectrumSpec,
}

impl System {
    pub fn new(drift: BaseDrift, spectrum: SpectrumSpec) -> Result<Self> {
        if let BaseDrift::SineSeries { .. } = drift {
            if spectrum.dim() != 1 {
                return Err(Error::Configuration(
                    "sine-series drift is one-dimensional".into(),
                ));
            }
        }
        Ok(System { drift, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_series_matches_direct_sum() {
        let b = BaseDrift::SineSeries { coefficients: vec![0.5, -0.25] };
        let mut out = [0.0];
        b.eval(&[0.3], &mut out);
        let expected = 0.5 * 0.3f64.sin() - 0.25 * 0.6f64.sin();
        assert!((out[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_give_zero_drift() {
        let b = BaseDrift::SineSeries { coefficients: vec![0.0; 4] };
        assert!(b.is_zero());
        let mut out = [1.0];
        b.eval(&[1.234], &mut out);
        assert_eq!(out[0], 0.0);
    }
}
