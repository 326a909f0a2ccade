//! Simulation of inertial particles driven by a truncated Ornstein–Uhlenbeck
//! random field with two fast relaxation times, together with the three
//! white-noise limits of the dynamics and a pathwise-coupled Monte Carlo
//! harness for measuring strong convergence rates.
//!
//! The full model, written with the relaxation time `m = τ₀ ε^γ`, is
//!
//! ```text
//! m ẍ = b(x) + f(x) η(t) / ε − ẋ,
//! dη  = −(1/ε²) A η dt + (1/ε) dW,
//! ```
//!
//! with `A = diag(α_k)` and `W` a `Q = diag(λ_k)` Wiener process. As `ε → 0`
//! the position converges to an Itô SDE whose drift picks up a correction
//! `∇·(f Θ̃ fᵀ) − f Θ̃ ∇·fᵀ` with `Θ̃ ∈ {0, Θ̂(τ₀), Θ}` for `γ < 2`, `γ = 2`
//! and `γ > 2` respectively.

pub mod applications;
pub mod error;
pub mod harness;
pub mod langevin;
pub mod limits;
pub mod noise;
mod regime;
pub mod spectrum;
mod system;
pub mod table;

pub use error::{Error, Result};
pub use regime::Regime;
pub use system::{BaseDrift, System};
