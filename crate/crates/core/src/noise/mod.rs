//! The truncated Ornstein–Uhlenbeck process `dη = −(1/ε²) A η dt + (1/ε) dW`,
//! its exact transition, the per-path random streams, and evaluation of the
//! field `v(x, t) = f(x) η(t)`.

mod driver;
mod field;
mod ou;

pub use driver::NoiseDriver;
pub use field::{diffusion_map, eval_field, eval_field_jacobian, FieldEvaluator};
pub use ou::{ou_step, step_covariances, OuStepper, StepCovariances};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::spectrum::SpectrumSpec;

/// Current OU coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseState {
    pub eta: Vec<f64>,
    pub time: f64,
}

impl NoiseState {
    pub fn zeros(k: usize) -> Self {
        NoiseState { eta: vec![0.0; k], time: 0.0 }
    }
}

/// Identifies the random streams of one Monte Carlo path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub master_seed: u64,
    pub path: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64, path: u64) -> Self {
        StreamKey { master_seed, path }
    }

    /// Counter-based stream for one mode: the ChaCha key is built from the
    /// master seed and path index, the stream id is the mode index. Streams
    /// depend only on `(master_seed, path, mode)`, never on scheduling.
    pub fn mode_stream(&self, mode: usize) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.path.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(mode as u64);
        rng
    }
}

/// One independent generator per mode.
#[derive(Debug, Clone)]
pub struct NoiseStreams {
    rngs: Vec<ChaCha8Rng>,
}

impl NoiseStreams {
    pub fn new(key: StreamKey, modes: usize) -> Self {
        NoiseStreams { rngs: (0..modes).map(|k| key.mode_stream(k)).collect() }
    }

    pub fn len(&self) -> usize {
        self.rngs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rngs.is_empty()
    }

    #[inline]
    pub fn mode(&mut self, k: usize) -> &mut ChaCha8Rng {
        &mut self.rngs[k]
    }
}

/// Draws `η_k ~ N(0, λ_k / (2 α_k))` independently.
pub fn sample_stationary<R: Rng + ?Sized>(spectrum: &SpectrumSpec, rng: &mut R) -> NoiseState {
    let eta = spectrum
        .modes()
        .iter()
        .map(|m| {
            let z: f64 = rng.sample(StandardNormal);
            m.stationary_variance().sqrt() * z
        })
        .collect();
    NoiseState { eta, time: 0.0 }
}

/// Stationary draw using the per-mode streams (first draw of each stream).
pub fn sample_stationary_streams(spectrum: &SpectrumSpec, streams: &mut NoiseStreams) -> NoiseState {
    let eta = spectrum
        .modes()
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let z: f64 = streams.mode(k).sample(StandardNormal);
            m.stationary_variance().sqrt() * z
        })
        .collect();
    NoiseState { eta, time: 0.0 }
}

/// Coarse-window sums of the scaled Brownian increments `√λ_k ΔB_k`
/// consumed by the coupled limiting dynamics. Row `n` holds window `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianGrid {
    pub fine_dt: f64,
    pub substeps: usize,
    pub modes: usize,
    pub key: StreamKey,
    sums: Vec<f64>,
    count: usize,
}

impl BrownianGrid {
    pub fn new(fine_dt: f64, substeps: usize, modes: usize, key: StreamKey) -> Self {
        BrownianGrid { fine_dt, substeps, modes, key, sums: Vec::new(), count: 0 }
    }

    pub fn push_window(&mut self, sums: &[f64]) {
        debug_assert_eq!(sums.len(), self.modes);
        self.sums.extend_from_slice(sums);
        self.count += 1;
    }

    pub fn windows(&self) -> usize {
        self.count
    }

    pub fn coarse_dt(&self) -> f64 {
        self.fine_dt * self.substeps as f64
    }

    pub fn window(&self, n: usize) -> &[f64] {
        &self.sums[n * self.modes..(n + 1) * self.modes]
    }

    /// Regenerates the increments of a path from its seed, without
    /// simulating the particle.
    pub fn replay(
        spectrum: &SpectrumSpec,
        fine_dt: f64,
        substeps: usize,
        windows: usize,
        epsilon: f64,
        key: StreamKey,
    ) -> crate::Result<Self> {
        let mut driver = NoiseDriver::stationary(spectrum, fine_dt, epsilon, key)?;
        let mut grid = BrownianGrid::new(fine_dt, substeps, spectrum.len(), key);
        let mut acc = vec![0.0; spectrum.len()];
        for _ in 0..windows {
            acc.fill(0.0);
            for _ in 0..substeps {
                driver.advance();
                for (a, w) in acc.iter_mut().zip(driver.increments()) {
                    *a += w;
                }
            }
            grid.push_window(&acc);
        }
        Ok(grid)
    }
}
