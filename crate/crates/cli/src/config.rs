//! TOML run configuration.
//!
//! ```toml
//! experiment = "converge"      # simulate | converge | discriminate | check-spectrum | mu-demo
//! seed = 7
//! output = "out"
//!
//! [system]
//! preset = "solids"            # or "inertial"
//! lambdas = [1.0]
//!
//! [params]
//! gamma = 1.0
//!
//! [converge]
//! ladder = [0.2, 0.1, 0.05, 0.025]
//! paths = 400
//! ```
//!
//! Unknown keys and duplicate keys are rejected. Every omitted value is
//! filled in on parsing, so rendering a parsed config lists all defaults.

use std::f64::consts::{FRAC_PI_4, TAU};

use anyhow::{bail, Context, Result};
use colored_limits::applications::{inertial_system, solids_power_law, solids_system, AmplitudeLaw};
use colored_limits::langevin::{ForcingRule, InitialCondition, SimParams};
use colored_limits::{Regime, System};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    Converge,
    Discriminate,
    CheckSpectrum,
    MuDemo,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Converge => "converge",
            Experiment::Discriminate => "discriminate",
            Experiment::CheckSpectrum => "check-spectrum",
            Experiment::MuDemo => "mu-demo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub converge: ConvergeConfig,
    #[serde(default)]
    pub discriminate: DiscriminateConfig,
    #[serde(default)]
    pub mu_demo: MuDemoConfig,
}

fn default_output() -> String {
    "out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    Solids {
        #[serde(default = "solids_mu0")]
        mu0: Vec<f64>,
        /// Explicit intensities; ignored when `power_law` is given.
        #[serde(default = "solids_lambdas")]
        lambdas: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power_law: Option<SolidsPowerLaw>,
        #[serde(default = "solids_x0")]
        x0: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y0: Option<Vec<f64>>,
    },
    Inertial {
        #[serde(default = "inertial_k_max")]
        k_max: f64,
        #[serde(default = "inertial_law")]
        law: AmplitudeLaw,
        #[serde(default = "inertial_x0")]
        x0: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y0: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolidsPowerLaw {
    pub lambda0: f64,
    pub decay: f64,
    pub modes: usize,
}

fn solids_mu0() -> Vec<f64> {
    vec![0.0]
}
fn solids_lambdas() -> Vec<f64> {
    vec![1.0]
}
fn solids_x0() -> Vec<f64> {
    vec![FRAC_PI_4]
}
fn inertial_k_max() -> f64 {
    2.0 * TAU
}
fn inertial_law() -> AmplitudeLaw {
    AmplitudeLaw::Power { lambda0: 1.0, decay: 8.0 }
}
fn inertial_x0() -> Vec<f64> {
    vec![0.1, 0.2]
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig::Solids {
            mu0: solids_mu0(),
            lambdas: solids_lambdas(),
            power_law: None,
            x0: solids_x0(),
            y0: None,
        }
    }
}

impl SystemConfig {
    pub fn build(&self) -> Result<(System, InitialCondition)> {
        let (system, x0, y0) = match self {
            SystemConfig::Solids { mu0, lambdas, power_law, x0, y0 } => {
                let s = match power_law {
                    Some(pl) => {
                        let mut mu = mu0.clone();
                        mu.resize(pl.modes.max(mu0.len()), 0.0);
                        if mu.len() != pl.modes {
                            bail!("system.mu0 has more entries than system.power_law.modes");
                        }
                        solids_power_law(mu, pl.lambda0, pl.decay, pl.modes)?
                    }
                    None => solids_system(mu0.clone(), lambdas.clone())?,
                };
                (s.system, x0, y0)
            }
            SystemConfig::Inertial { k_max, law, x0, y0 } => (inertial_system(*k_max, *law)?.system, x0, y0),
        };
        let init = InitialCondition { x0: x0.clone(), y0: y0.clone() };
        init.check(system.dim()).context("system.x0 / system.y0")?;
        Ok((system, init))
    }
}

/// `SimParams` without the seed, which lives at the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub tau0: f64,
    #[serde(default = "one")]
    pub horizon: f64,
    #[serde(default = "default_fine_factor")]
    pub fine_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_dt: Option<f64>,
    #[serde(default = "default_p")]
    pub p: u32,
    #[serde(default)]
    pub forcing: ForcingRule,
}

fn default_epsilon() -> f64 {
    0.1
}
fn default_gamma() -> f64 {
    1.0
}
fn one() -> f64 {
    1.0
}
fn default_fine_factor() -> f64 {
    10.0
}
fn default_p() -> u32 {
    1
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            epsilon: default_epsilon(),
            gamma: default_gamma(),
            tau0: one(),
            horizon: one(),
            fine_factor: default_fine_factor(),
            coarse_dt: None,
            p: default_p(),
            forcing: ForcingRule::default(),
        }
    }
}

impl ParamsConfig {
    pub fn sim_params(&self, seed: u64) -> SimParams {
        SimParams {
            epsilon: self.epsilon,
            gamma: self.gamma,
            tau0: self.tau0,
            horizon: self.horizon,
            fine_factor: self.fine_factor,
            coarse_dt: self.coarse_dt,
            p: self.p,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    /// Path index within the master seed.
    #[serde(default)]
    pub path: u64,
    /// Keep every `stride`-th coarse node in the trajectory table.
    #[serde(default = "one_usize")]
    pub stride: usize,
}

fn one_usize() -> usize {
    1
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { path: 0, stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    #[serde(default = "default_paths")]
    pub paths: usize,
    /// Half-width of the accepted slope band around the theoretical
    /// exponent; 0.3 below γ = 2 and 0.5 from γ = 2 on when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Largest accepted slope change when the largest ε is dropped.
    #[serde(default = "default_stability")]
    pub stability: f64,
}

fn default_ladder() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.025]
}
fn default_paths() -> usize {
    400
}
fn default_stability() -> f64 {
    0.2
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig { ladder: default_ladder(), paths: default_paths(), tolerance: None, stability: default_stability() }
    }
}

impl ConvergeConfig {
    pub fn tolerance_for(&self, gamma: f64) -> f64 {
        self.tolerance.unwrap_or(if gamma < 2.0 { 0.3 } else { 0.5 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscriminateConfig {
    #[serde(default = "default_discrimination_paths")]
    pub paths: usize,
}

fn default_discrimination_paths() -> usize {
    1000
}

impl Default for DiscriminateConfig {
    fn default() -> Self {
        DiscriminateConfig { paths: default_discrimination_paths() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuDemoConfig {
    #[serde(default = "default_mu_paths")]
    pub paths: usize,
    /// The grid has `2^grid_exponent` steps.
    #[serde(default = "default_grid_exponent")]
    pub grid_exponent: u32,
    #[serde(default = "default_mus")]
    pub mus: Vec<f64>,
    /// Rate and τ₀ pairs whose weight `1/(2(1+τ₀α))` is added to `mus`.
    #[serde(default)]
    pub from_tau0: Vec<[f64; 2]>,
}

fn default_mu_paths() -> usize {
    200
}
fn default_grid_exponent() -> u32 {
    12
}
fn default_mus() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0]
}

impl Default for MuDemoConfig {
    fn default() -> Self {
        MuDemoConfig {
            paths: default_mu_paths(),
            grid_exponent: default_grid_exponent(),
            mus: default_mus(),
            from_tau0: Vec::new(),
        }
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).context("invalid configuration")?;
    config.validate()?;
    Ok(config)
}

pub fn render_config(config: &RunConfig) -> Result<String> {
    toml::to_string(config).context("rendering configuration")
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let params = self.params.sim_params(self.seed);
        params.validate().context("params")?;
        Regime::from_gamma(params.gamma, params.tau0).context("params")?;
        self.system.build().context("system")?;
        if self.workers == Some(0) {
            bail!("workers: at least one worker is required");
        }
        if self.output.is_empty() {
            bail!("output: empty directory name");
        }
        match self.experiment {
            Experiment::Simulate => {
                if self.simulate.stride == 0 {
                    bail!("simulate.stride must be ≥ 1");
                }
            }
            Experiment::Converge => {
                let c = &self.converge;
                if c.ladder.len() < 3 {
                    bail!("converge.ladder needs at least 3 values of ε");
                }
                if let Some(e) = c.ladder.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
                    bail!("converge.ladder: ε must be positive, got {e}");
                }
                if c.paths < 2 {
                    bail!("converge.paths must be ≥ 2");
                }
                if let Some(t) = c.tolerance {
                    if !(t > 0.0) {
                        bail!("converge.tolerance must be positive");
                    }
                }
            }
            Experiment::Discriminate => {
                if params.gamma != 2.0 {
                    bail!("discriminate runs at params.gamma = 2, got {}", params.gamma);
                }
                if self.discriminate.paths < 2 {
                    bail!("discriminate.paths must be ≥ 2");
                }
            }
            Experiment::CheckSpectrum => {}
            Experiment::MuDemo => {
                let m = &self.mu_demo;
                if m.paths < 2 {
                    bail!("mu_demo.paths must be ≥ 2");
                }
                if m.grid_exponent == 0 || m.grid_exponent > 24 {
                    bail!("mu_demo.grid_exponent must lie in 1..=24");
                }
                if let Some(mu) = m.mus.iter().find(|mu| !(0.0..=1.0).contains(*mu)) {
                    bail!("mu_demo.mus: μ must lie in [0, 1], got {mu}");
                }
                for [alpha, tau0] in &m.from_tau0 {
                    colored_limits::limits::mu_from_tau0(*alpha, *tau0).context("mu_demo.from_tau0")?;
                }
            }
        }
        Ok(())
    }

    pub fn sim_params(&self) -> SimParams {
        self.params.sim_params(self.seed)
    }
}
