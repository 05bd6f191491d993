//! Numerical stress tests of inequalities.
//!
//! Every check produces an [`InequalityReport`] holding the largest observed
//! ratio `LHS/RHS` at three sample sizes or resolutions. Inequalities whose
//! constant is implicit pass when that ratio does not grow (10% slack);
//! inequalities with an explicit constant must additionally stay below it.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::AdmissibleWeight;

pub mod commutators;
pub mod embeddings;
pub mod fields;
pub mod lemmas;
pub mod pointwise;
pub mod theta;

pub use fields::{trial_rng, FieldCoefficients, FieldSpec};

/// Growth allowed between consecutive entries of a refinement trend.
pub const TREND_SLACK: f64 = 1.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bounded,
    SuspectDivergent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub sample_count: usize,
    pub max_ratio: f64,
    pub refinement_trend: Vec<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_constant: Option<f64>,
    pub notes: String,
}

/// `true` when every entry is finite and none exceeds its predecessor by
/// more than [`TREND_SLACK`].
pub fn trend_is_bounded(trend: &[f64]) -> bool {
    trend.iter().all(|v| v.is_finite()) && trend.windows(2).all(|w| w[1] <= TREND_SLACK * w[0] || w[1] == 0.0)
}

impl InequalityReport {
    pub fn new(name: &str, sample_count: usize, trend: Vec<f64>, notes: String) -> Self {
        let max_ratio = trend.iter().copied().fold(0.0, f64::max);
        let max_ratio = if trend.iter().any(|v| !v.is_finite()) { f64::INFINITY } else { max_ratio };
        let verdict = if trend_is_bounded(&trend) { Verdict::Bounded } else { Verdict::SuspectDivergent };
        Self { name: name.into(), sample_count, max_ratio, refinement_trend: trend, verdict, explicit_constant: None, notes }
    }

    /// Requires `max_ratio ≤ c` on top of the trend condition.
    pub fn with_explicit_constant(mut self, c: f64) -> Self {
        self.explicit_constant = Some(c);
        if !(self.max_ratio <= c * (1.0 + 1e-12)) {
            self.verdict = Verdict::SuspectDivergent;
        }
        self
    }

    pub fn bounded(&self) -> bool {
        self.verdict == Verdict::Bounded
    }
}

/// Parameters shared by the field-based suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub resolutions: Vec<usize>,
    pub half_length: f64,
    pub field: FieldSpec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 1, trials: 50, resolutions: alloc::vec![512, 1024, 2048], half_length: 8.0 * PI, field: FieldSpec::default() }
    }
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 9] =
    ["pointwise", "theta", "commutators", "embeddings", "hardy_riesz", "lemma_differences", "gamma", "kappa", "nonlinear"];

/// Runs one registered suite; `"all"` runs every suite in [`SUITES`] order.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let w = AdmissibleWeight::logarithmic()?;
    Ok(match name {
        "pointwise" => pointwise::pointwise_lemma_suite(cfg.trials.max(1000), cfg.seed),
        "theta" => alloc::vec![theta::theta_fourier_check(&[0.25, 1.0, 4.0], cfg)?],
        "commutators" => commutators::commutator_estimate_suite(&w, cfg)?,
        "embeddings" => embeddings::embedding_suite(cfg)?,
        "hardy_riesz" => embeddings::hardy_riesz_suite(cfg)?,
        "lemma_differences" => lemmas::difference_lemma_suite(cfg)?,
        "gamma" => lemmas::gamma_suite(&w, cfg)?,
        "kappa" => lemmas::kappa_suite(&w, cfg)?,
        "nonlinear" => lemmas::nonlinear_suite(&w, cfg)?,
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, cfg)?);
            }
            out
        }
        other => return Err(Error::InvalidParameter(alloc::format!("unknown suite {other:?}"))),
    })
}
