//! Experiment configuration: one JSON file, unknown keys rejected.

use std::path::{Path, PathBuf};

use muskat_core::evolve::{SolverConfig, WeightChoice};
use muskat_core::verify::{FieldCoefficients, FieldSpec};
use muskat_core::{PeriodicGrid, SampledField};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Cosine,
    GaussianBump,
    RandomBandlimited,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub kind: InitialKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default = "one_u64")]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_interval")]
    pub interval: f64,
    #[serde(default)]
    pub snapshots: Vec<f64>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: default_dir(), interval: default_interval(), snapshots: Vec::new() }
    }
}

fn one() -> f64 {
    1.0
}

fn one_u64() -> u64 {
    1
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_interval() -> f64 {
    0.1
}

fn default_eps() -> f64 {
    SolverConfig::default().eps
}

fn default_dt_max() -> f64 {
    SolverConfig::default().dt_max
}

fn default_cfl() -> f64 {
    SolverConfig::default().cfl_c
}

fn default_dealias() -> f64 {
    SolverConfig::default().dealias_fraction
}

fn default_weight() -> WeightChoice {
    SolverConfig::default().weight
}

fn default_power() -> f64 {
    SolverConfig::default().dissipation_power
}

fn default_blowup() -> f64 {
    SolverConfig::default().blowup_slope
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "L")]
    pub half_length: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_list: Option<Vec<f64>>,
    pub t_end: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_cfl")]
    pub cfl_c: f64,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
    #[serde(default = "default_weight")]
    pub weight: WeightChoice,
    #[serde(default = "default_power")]
    pub dissipation_power: f64,
    #[serde(default = "default_blowup")]
    pub blowup_slope: f64,
    pub initial_data: InitialData,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Whether `run` evolves one `ε` or a decreasing list of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Single,
    Continuation,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let v = cfg.violations();
        if v.is_empty() {
            Ok(cfg)
        } else {
            Err(CliError::Validation(v))
        }
    }

    pub fn mode(&self) -> RunMode {
        if self.eps_list.is_some() {
            RunMode::Continuation
        } else {
            RunMode::Single
        }
    }

    pub fn grid(&self) -> Result<PeriodicGrid, CliError> {
        Ok(PeriodicGrid::new(self.half_length, self.n)?)
    }

    pub fn solver(&self, eps: f64) -> SolverConfig {
        SolverConfig {
            eps,
            dissipation_power: self.dissipation_power,
            t_end: self.t_end,
            dt_max: self.dt_max,
            cfl_c: self.cfl_c,
            dealias_fraction: self.dealias_fraction,
            output_interval: self.output.interval,
            snapshot_times: self.output.snapshots.clone(),
            blowup_slope: self.blowup_slope,
            weight: self.weight,
            ..SolverConfig::default()
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.n >= 8 && self.n.is_power_of_two()) {
            v.push(format!("N = {} must be a power of two and at least 8", self.n));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            v.push("L must be positive".to_string());
        }
        if let Some(list) = &self.eps_list {
            if list.is_empty() {
                v.push("eps_list must not be empty".into());
            }
            if muskat_core::evolve::check_eps_list(list).is_err() {
                v.push("eps_list must be positive and non-increasing".into());
            }
        }
        if let Some(list) = &self.amplitude_list {
            if list.is_empty() || list.iter().any(|a| !a.is_finite()) {
                v.push("amplitude_list must be a non-empty list of finite numbers".into());
            }
        }
        if self.eps_list.is_some() && self.amplitude_list.is_some() {
            v.push("eps_list and amplitude_list are mutually exclusive".into());
        }
        if !self.initial_data.amplitude.is_finite() {
            v.push("initial_data.amplitude must be finite".into());
        }
        v.extend(self.param_violations());
        v.extend(self.solver(self.eps).violations().into_iter().map(String::from));
        v
    }

    fn param_violations(&self) -> Vec<String> {
        let allowed: &[&str] = match self.initial_data.kind {
            InitialKind::Cosine => &["mode"],
            InitialKind::GaussianBump => &["width", "center"],
            InitialKind::RandomBandlimited => &["modes", "slope"],
            InitialKind::File => &["path"],
        };
        let mut v: Vec<String> = self
            .initial_data
            .params
            .keys()
            .filter(|k| !allowed.contains(&k.as_str()))
            .map(|k| format!("unknown initial_data.params key {k:?} for {:?}", self.initial_data.kind))
            .collect();
        if self.initial_data.kind == InitialKind::File && self.param_str("path").is_none() {
            v.push("initial_data.params.path is required for kind \"file\"".into());
        }
        v
    }

    fn param_f64(&self, key: &str) -> Option<f64> {
        self.initial_data.params.get(key).and_then(Value::as_f64)
    }

    fn param_str(&self, key: &str) -> Option<&str> {
        self.initial_data.params.get(key).and_then(Value::as_str)
    }

    /// Samples the initial interface with the configured amplitude.
    pub fn initial_field(&self, base: &Path) -> Result<SampledField, CliError> {
        self.initial_field_with_amplitude(base, self.initial_data.amplitude)
    }

    /// `file` paths are resolved relative to `base`.
    pub fn initial_field_with_amplitude(&self, base: &Path, amp: f64) -> Result<SampledField, CliError> {
        let grid = self.grid()?;
        let l = self.half_length;
        let f = match self.initial_data.kind {
            InitialKind::Cosine => {
                let k = std::f64::consts::PI * self.param_f64("mode").unwrap_or(1.0) / l;
                grid.sample(|x| amp * (k * x).cos())
            }
            InitialKind::GaussianBump => {
                let w = self.param_f64("width").unwrap_or(l / 8.0);
                let c = self.param_f64("center").unwrap_or(0.0);
                grid.sample(|x| amp * (-(x - c) * (x - c) / (2.0 * w * w)).exp())
            }
            InitialKind::RandomBandlimited => {
                let spec = FieldSpec {
                    modes: self.param_f64("modes").map(|m| m as usize).unwrap_or(FieldSpec::default().modes),
                    slope: self.param_f64("slope").unwrap_or(FieldSpec::default().slope),
                    amplitude: amp,
                };
                let mut rng = muskat_core::verify::trial_rng(self.initial_data.seed, 0);
                FieldCoefficients::draw(l, &spec, &mut rng).sample(&grid)
            }
            InitialKind::File => {
                let path = base.join(self.param_str("path").unwrap_or_default());
                let values = crate::output::read_profile(&path)?;
                SampledField::new(&grid, values.into_iter().map(|v| amp * v).collect())?
            }
        };
        Ok(f)
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::parse(&text)
}
