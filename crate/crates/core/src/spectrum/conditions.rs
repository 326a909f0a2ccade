//! Summability conditions for power-law spectra, decided by exponent
//! arithmetic on `Σ k^q`.

use serde::{Deserialize, Serialize};

use crate::Regime;

/// Power-law metadata of a spectral family:
/// `λ_k ~ k^{-a}`, `α_k ~ k^{b}`, `‖h_k‖ ≤ C α_k^r` and
/// `‖Dⁿφ_k‖∞ ≤ C α_k^{e_n}` for `n = 0..3` (the eigenfunction exponents
/// usually written α, β, γ, δ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub lambda_decay: f64,
    pub alpha_growth: f64,
    pub direction_growth: f64,
    pub phi_sup: Option<f64>,
    pub phi_grad: Option<f64>,
    pub phi_hess: Option<f64>,
    pub phi_third: Option<f64>,
    /// Dimension of the index lattice (1 for `k ∈ N`, 2 for `k ∈ Z²`).
    #[serde(default = "one")]
    pub lattice_dim: usize,
}

fn one() -> usize {
    1
}

impl PowerLaw {
    /// Exponents of trigonometric eigenfunctions with `α_k ~ |k|^b`:
    /// `‖Dⁿφ‖∞ ~ |k|ⁿ = α^{n/b}`.
    pub fn trigonometric(lambda_decay: f64, alpha_growth: f64, direction_growth: f64, lattice_dim: usize) -> Self {
        let e = |n: f64| Some(n / alpha_growth);
        PowerLaw {
            lambda_decay,
            alpha_growth,
            direction_growth,
            phi_sup: e(0.0),
            phi_grad: e(1.0),
            phi_hess: e(2.0),
            phi_third: e(3.0),
            lattice_dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    Fails,
    CannotCheck(String),
}

impl Verdict {
    pub fn as_str(&self) -> &str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Fails => "fails",
            Verdict::CannotCheck(_) => "cannot_check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub name: String,
    /// Human-readable series, in the conventional α/β/γ/δ notation.
    pub series: String,
    /// Effective radial exponent `q` of `Σ k^q`; `None` when not checkable.
    pub exponent: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub regime: Regime,
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    /// `Some(true)` if every series converges, `Some(false)` if any fails,
    /// `None` if something could not be checked and nothing failed.
    pub fn all_converge(&self) -> Option<bool> {
        if self.entries.iter().any(|e| e.verdict == Verdict::Fails) {
            Some(false)
        } else if self.entries.iter().any(|e| matches!(e.verdict, Verdict::CannotCheck(_))) {
            None
        } else {
            Some(true)
        }
    }
}

struct Series {
    name: &'static str,
    series: &'static str,
    /// Power of `λ_k` (1 or 1/2).
    lambda_power: f64,
    eigen: Option<Eigen>,
    /// Constant part of the `α_k` exponent.
    offset: f64,
    /// Multiplier of `r` in the `α_k` exponent.
    r_mult: f64,
}

#[derive(Clone, Copy)]
enum Eigen {
    Sup,
    Grad,
    Hess,
    Third,
    GradHess,
}

fn required(regime: &Regime) -> Vec<Series> {
    let mut out = vec![Series {
        name: "trace",
        series: "Σ λ_k / (2 α_k)",
        lambda_power: 1.0,
        eigen: None,
        offset: -1.0,
        r_mult: 0.0,
    }];
    // ρ = 1/2 for the sup-norm series in every regime
    out.push(Series {
        name: "sqrt_lambda_phi_sup",
        series: "Σ √λ_k α_k^(r + α − 1/2 − ρ), ρ = 1/2",
        lambda_power: 0.5,
        eigen: Some(Eigen::Sup),
        offset: -1.0,
        r_mult: 1.0,
    });
    if regime.needs_strong_conditions() {
        out.push(Series {
            name: "sqrt_lambda_phi_grad",
            series: "Σ √λ_k α_k^(r + β − 1/2 − ρ), ρ = 0",
            lambda_power: 0.5,
            eigen: Some(Eigen::Grad),
            offset: -0.5,
            r_mult: 1.0,
        });
        out.push(Series {
            name: "sqrt_lambda_phi_hess",
            series: "Σ √λ_k α_k^(r + γ − 3/2)",
            lambda_power: 0.5,
            eigen: Some(Eigen::Hess),
            offset: -1.5,
            r_mult: 1.0,
        });
        out.push(Series {
            name: "sqrt_lambda_phi_third",
            series: "Σ √λ_k α_k^(r + δ − 3/2)",
            lambda_power: 0.5,
            eigen: Some(Eigen::Third),
            offset: -1.5,
            r_mult: 1.0,
        });
        out.push(Series {
            name: "lambda_grad_hess",
            series: "Σ λ_k α_k^(2r + β + γ − 2)",
            lambda_power: 1.0,
            eigen: Some(Eigen::GradHess),
            offset: -2.0,
            r_mult: 2.0,
        });
    } else {
        out.push(Series {
            name: "sqrt_lambda_phi_grad",
            series: "Σ √λ_k α_k^(r + β − 1/2 − ρ), ρ = 1/2",
            lambda_power: 0.5,
            eigen: Some(Eigen::Grad),
            offset: -1.0,
            r_mult: 1.0,
        });
    }
    out
}

/// Checks the summability conditions required by `regime` for a power-law
/// family. Missing metadata yields `CannotCheck` entries, never a pass.
pub fn check_conditions(exponents: Option<&PowerLaw>, regime: Regime) -> ConditionReport {
    let entries = required(&regime)
        .into_iter()
        .map(|s| evaluate(&s, exponents))
        .collect();
    ConditionReport { regime, entries }
}

fn evaluate(s: &Series, law: Option<&PowerLaw>) -> ConditionEntry {
    let cannot = |why: &str| ConditionEntry {
        name: s.name.to_string(),
        series: s.series.to_string(),
        exponent: None,
        verdict: Verdict::CannotCheck(why.to_string()),
    };
    let Some(law) = law else {
        return cannot("no power-law metadata");
    };
    let eigen = match s.eigen {
        None => Some(0.0),
        Some(Eigen::Sup) => law.phi_sup,
        Some(Eigen::Grad) => law.phi_grad,
        Some(Eigen::Hess) => law.phi_hess,
        Some(Eigen::Third) => law.phi_third,
        Some(Eigen::GradHess) => law.phi_grad.zip(law.phi_hess).map(|(b, g)| b + g),
    };
    let Some(eigen) = eigen else {
        return cannot("missing eigenfunction exponent");
    };
    let alpha_power = s.offset + s.r_mult * law.direction_growth + eigen;
    // λ_k^p α_k^e ~ k^{-a p + b e}; a D-dimensional lattice adds D − 1 radially
    let q = -law.lambda_decay * s.lambda_power
        + law.alpha_growth * alpha_power
        + (law.lattice_dim.max(1) - 1) as f64;
    ConditionEntry {
        name: s.name.to_string(),
        series: s.series.to_string(),
        exponent: Some(q),
        verdict: if q < -1.0 { Verdict::Converges } else { Verdict::Fails },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn solids(lambda_decay: f64) -> PowerLaw {
        // α_j = j², h_j = 1, φ_j = sin(jx)
        PowerLaw::trigonometric(lambda_decay, 2.0, 0.0, 1)
    }

    fn entry<'a>(r: &'a ConditionReport, name: &str) -> &'a ConditionEntry {
        r.entries.iter().find(|e| e.name == name).unwrap()
    }

    #[test]
    fn solids_family_small_gamma() {
        let r = check_conditions(Some(&solids(6.0)), Regime::Ito);
        // governing series Σ √λ_j j^{-1} = Σ j^{-4}
        let g = entry(&r, "sqrt_lambda_phi_grad");
        assert_eq!(g.exponent, Some(-4.0));
        assert_eq!(g.verdict, Verdict::Converges);
        assert_eq!(r.all_converge(), Some(true));
    }

    #[test]
    fn solids_family_large_gamma() {
        for regime in [Regime::Intermediate { tau0: 1.0 }, Regime::Stratonovich] {
            let r = check_conditions(Some(&solids(6.0)), regime);
            // governing series Σ √λ_j = Σ j^{-3}
            let g = entry(&r, "sqrt_lambda_phi_grad");
            assert_eq!(g.exponent, Some(-3.0));
            assert_eq!(entry(&r, "sqrt_lambda_phi_third").exponent, Some(-3.0));
            assert_eq!(r.all_converge(), Some(true));
        }
    }

    #[test]
    fn flat_intensity_gives_mixed_report() {
        let r = check_conditions(Some(&solids(0.0)), Regime::Stratonovich);
        let trace = entry(&r, "trace");
        assert_eq!(trace.exponent, Some(-2.0));
        assert_eq!(trace.verdict, Verdict::Converges);
        assert_eq!(entry(&r, "lambda_grad_hess").verdict, Verdict::Fails);
        assert_eq!(r.all_converge(), Some(false));
    }

    #[test]
    fn missing_metadata_is_never_a_pass() {
        let r = check_conditions(None, Regime::Ito);
        assert!(r.entries.iter().all(|e| matches!(e.verdict, Verdict::CannotCheck(_))));
        assert_eq!(r.all_converge(), None);

        let mut law = solids(6.0);
        law.phi_third = None;
        let r = check_conditions(Some(&law), Regime::Stratonovich);
        assert!(matches!(entry(&r, "sqrt_lambda_phi_third").verdict, Verdict::CannotCheck(_)));
        assert_eq!(r.all_converge(), None);
    }

    #[test]
    fn lattice_dimension_shifts_exponent() {
        // Σ_{k ∈ Z²} |k|^{-3} converges, Σ_{k ∈ Z²} |k|^{-2} does not
        let law = PowerLaw::trigonometric(4.0, 2.0, 0.0, 2);
        let r = check_conditions(Some(&law), Regime::Ito);
        assert_eq!(entry(&r, "trace").exponent, Some(-5.0));
        let law = PowerLaw::trigonometric(0.0, 2.0, 0.0, 2);
        let r = check_conditions(Some(&law), Regime::Ito);
        assert_eq!(entry(&r, "trace").exponent, Some(-1.0));
        assert_eq!(entry(&r, "trace").verdict, Verdict::Fails);
    }

    /// Partial sums of the actual series terms with unit constants.
    fn partial_sums(law: &PowerLaw, name: &str, regime: Regime, k_max: usize) -> Vec<f64> {
        let q = entry(&check_conditions(Some(law), regime), name).exponent.unwrap();
        let mut acc = 0.0;
        (1..=k_max)
            .map(|k| {
                acc += (k as f64).powf(q);
                acc
            })
            .collect()
    }

    proptest! {
        #[test]
        fn verdicts_agree_with_partial_sums(a in 0.0f64..10.0, b in 0.5f64..3.0, r in -0.5f64..0.5) {
            let law = PowerLaw::trigonometric(a, b, r, 1);
            let report = check_conditions(Some(&law), Regime::Stratonovich);
            for e in &report.entries {
                let q = e.exponent.unwrap();
                let sums = partial_sums(&law, &e.name, Regime::Stratonovich, 10_000);
                if q <= -1.5 {
                    prop_assert_eq!(&e.verdict, &Verdict::Converges);
                    let last = sums[9_999] - sums[9_998];
                    prop_assert!(last <= 1e-6);
                } else if q >= -0.5 {
                    prop_assert_eq!(&e.verdict, &Verdict::Fails);
                    prop_assert!(sums[9_999] > 100.0);
                    prop_assert!(sums[9_999] > 5.0 * sums[99]);
                }
            }
        }
    }
}
