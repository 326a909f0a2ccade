use super::{sample_stationary_streams, NoiseStreams, OuStepper, StreamKey};
use crate::error::Result;
use crate::spectrum::SpectrumSpec;

/// Per-path OU driver: stationary start, exact fine steps, and the
/// quantities each step exposes to the particle and limit integrators.
#[derive(Debug, Clone)]
pub struct NoiseDriver {
    stepper: OuStepper,
    streams: NoiseStreams,
    eta: Vec<f64>,
    left: Vec<f64>,
    increments: Vec<f64>,
    averages: Vec<f64>,
    steps: u64,
}

impl NoiseDriver {
    /// Starts from a stationary draw taken from the path's own streams.
    pub fn stationary(spectrum: &SpectrumSpec, dt: f64, epsilon: f64, key: StreamKey) -> Result<Self> {
        let stepper = OuStepper::new(spectrum, dt, epsilon)?;
        let mut streams = NoiseStreams::new(key, spectrum.len());
        let eta = sample_stationary_streams(spectrum, &mut streams).eta;
        let k = eta.len();
        Ok(NoiseDriver {
            stepper,
            streams,
            left: eta.clone(),
            eta,
            increments: vec![0.0; k],
            averages: vec![0.0; k],
            steps: 0,
        })
    }

    #[inline]
    pub fn advance(&mut self) {
        self.left.copy_from_slice(&self.eta);
        self.stepper
            .advance(&mut self.eta, &mut self.streams, &mut self.increments, &mut self.averages);
        self.steps += 1;
    }

    pub fn dt(&self) -> f64 {
        self.stepper.dt()
    }

    /// Coordinates after the latest step.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// Coordinates at the start of the latest step.
    pub fn left(&self) -> &[f64] {
        &self.left
    }

    /// `√λ_k ΔB_k` of the latest step.
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Exact averages `(1/δ)∫ η_k ds` over the latest step.
    pub fn averages(&self) -> &[f64] {
        &self.averages
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}
