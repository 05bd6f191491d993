//! Time integration of `∂_t f + ε|D|^p f + |D|f = T(f)f`.
//!
//! The linear symbol `ℓ(ξ) = ε|ξ|^p + |ξ|` is integrated exactly; the
//! nonlinearity is advanced by the two-stage midpoint rule in the
//! integrating-factor variable:
//!
//! `f̂_{1/2} = e^{−ℓdt/2}(f̂_n + dt/2·N̂(f_n))`,
//! `f̂_{n+1} = e^{−ℓdt} f̂_n + dt·e^{−ℓdt/2} N̂(f_{1/2})`.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaQuadrature;
use crate::diagnostics::{coercive_plain, slope_weighted_curvature, sobolev_norm, EnergyRecord};
use crate::error::{Error, Result};
use crate::grid_spectral::{PeriodicGrid, SampledField, Spectrum};
use crate::muskat::Muskat;
use crate::operators::derivative;
use crate::weights::{weight_from_data, AdmissibleWeight, GridWeight};

/// Admissible weight used by the diagnostics of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightChoice {
    Constant,
    #[serde(rename = "log")]
    Logarithmic,
    FromData,
}

/// Integrator parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub eps: f64,
    /// Power `p` of the regularization `ε|D|^p`.
    pub dissipation_power: f64,
    pub t_end: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub cfl_c: f64,
    pub dealias_fraction: f64,
    pub output_interval: f64,
    pub snapshot_times: Vec<f64>,
    /// Blow-up is declared when `‖f_x‖_∞` exceeds this.
    pub blowup_slope: f64,
    /// Relative `L²`-growth tolerated before a step is rejected.
    pub energy_guard: f64,
    pub alpha_extent: usize,
    pub weight: WeightChoice,
    /// `false` drops `T(f)f` and leaves the linear flow.
    pub nonlinear: bool,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-4,
            dissipation_power: 8.0,
            t_end: 1.0,
            dt_max: 1e-2,
            dt_min: 1e-12,
            cfl_c: 0.5,
            dealias_fraction: 2.0 / 3.0,
            output_interval: 0.1,
            snapshot_times: Vec::new(),
            blowup_slope: 1e6,
            energy_guard: 1e-12,
            alpha_extent: 1,
            weight: WeightChoice::Logarithmic,
            nonlinear: true,
            max_steps: 50_000_000,
        }
    }
}

impl SolverConfig {
    /// All violated constraints, empty when valid.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            v.push("eps must be finite and nonnegative");
        }
        if !(self.dissipation_power > 0.0) {
            v.push("dissipation_power must be positive");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            v.push("t_end must be positive");
        }
        if !(self.dt_max > 0.0) {
            v.push("dt_max must be positive");
        }
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_max) {
            v.push("dt_min must be positive and at most dt_max");
        }
        if !(self.cfl_c > 0.0) {
            v.push("cfl_c must be positive");
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            v.push("dealias_fraction must lie in (0, 1]");
        }
        if !(self.output_interval > 0.0) {
            v.push("output interval must be positive");
        }
        if self.snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= self.t_end)) {
            v.push("snapshot times must lie in [0, t_end]");
        }
        if !(self.blowup_slope > 0.0) {
            v.push("blowup_slope must be positive");
        }
        if !(self.energy_guard >= 0.0) {
            v.push("energy_guard must be nonnegative");
        }
        if self.alpha_extent == 0 {
            v.push("alpha_extent must be positive");
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(m) => Err(Error::InvalidParameter((*m).into())),
        }
    }
}

/// State of the integrator.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub t: f64,
    pub f: SampledField,
    pub eps: f64,
    pub dt: f64,
    pub step_count: usize,
}

/// Why a trajectory stopped before `t_end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowUp {
    NonFinite,
    Slope { value: f64 },
    StepUnderflow { dt: f64 },
    StepLimit,
}

/// Outcome of [`run_trajectory`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    BlowUp { t: f64, reason: BlowUp },
}

/// Energy records at output times, together with the states.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<EnergyRecord>,
    /// `∫₀^t ∫ f_xx²/(1+f_x²) dx dt` at each record.
    pub dissipation: Vec<f64>,
    /// States at the record times.
    pub states: Vec<SampledField>,
    pub snapshots: Vec<(f64, SampledField)>,
    pub steps: usize,
    pub rejections: usize,
    /// Largest relative `L²` growth over accepted steps.
    pub max_l2_growth: f64,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn final_state(&self) -> Option<&SampledField> {
        self.states.last()
    }
}

/// Precomputed pieces of the stepper for one grid and configuration.
#[derive(Clone, Debug)]
pub struct Stepper {
    muskat: Muskat,
    symbol: Vec<f64>,
    nonlinear: bool,
}

impl Stepper {
    pub fn new(grid: &PeriodicGrid, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let aq = AlphaQuadrature::new(grid, 1, 1, cfg.alpha_extent)?;
        let muskat = Muskat::with_quadrature(aq).with_dealias(cfg.dealias_fraction)?;
        let symbol = (0..grid.len())
            .map(|i| {
                let k = grid.xi(i).abs();
                cfg.eps * k.powf(cfg.dissipation_power) + k
            })
            .collect();
        Ok(Self { muskat, symbol, nonlinear: cfg.nonlinear })
    }

    pub fn muskat(&self) -> &Muskat {
        &self.muskat
    }

    fn nonlinearity(&self, f: &SampledField) -> Spectrum {
        if !self.nonlinear {
            return Spectrum::zeros(f.grid());
        }
        let t = self.muskat.apply_t(f, f);
        t.spectrum().dealias(self.muskat.keep_fraction())
    }

    fn propagate(&self, s: &Spectrum, tau: f64) -> Spectrum {
        let tab: Vec<f64> = self.symbol.iter().map(|l| (-l * tau).exp()).collect();
        s.apply_table(&tab)
    }

    /// One step of size `dt`.
    pub fn step(&self, f: &SampledField, dt: f64) -> Result<SampledField> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        let fh = f.spectrum();
        let n0 = self.nonlinearity(f);
        let mut pre = fh.clone();
        for (c, n) in pre.coeffs_mut().iter_mut().zip(n0.coeffs()) {
            *c += n * (0.5 * dt);
        }
        let half = self.propagate(&pre, 0.5 * dt).to_field();
        if !half.is_finite() {
            return Err(Error::NonFinite("midpoint stage"));
        }
        let n1 = self.propagate(&self.nonlinearity(&half), 0.5 * dt);
        let mut out = self.propagate(&fh, dt);
        for (c, n) in out.coeffs_mut().iter_mut().zip(n1.coeffs()) {
            *c += n * dt;
        }
        let out = out.to_field();
        if !out.is_finite() {
            return Err(Error::NonFinite("state"));
        }
        Ok(out)
    }
}

/// One integrating-factor step of the regularized equation.
pub fn imex_step(stepper: &Stepper, state: &SolverState, dt: f64) -> Result<SolverState> {
    let f = stepper.step(&state.f, dt)?;
    Ok(SolverState { t: state.t + dt, f, eps: state.eps, dt, step_count: state.step_count + 1 })
}

fn cfl_dt(cfg: &SolverConfig, f: &SampledField) -> (f64, f64) {
    let slope = derivative(f, 1).max_abs();
    (cfg.dt_max.min(cfg.cfl_c * f.grid().spacing() / (1.0 + slope)), slope)
}

/// Diagnostics weight selected by `cfg.weight`.
pub fn diagnostics_weight(cfg: &SolverConfig, f0: &SampledField) -> Result<GridWeight> {
    let w = match cfg.weight {
        WeightChoice::Constant => AdmissibleWeight::constant(),
        WeightChoice::Logarithmic => AdmissibleWeight::logarithmic()?,
        WeightChoice::FromData => weight_from_data(&f0.spectrum())?,
    };
    GridWeight::new(&w, f0.grid())
}

/// Integrates from `f0` to `cfg.t_end` or until blow-up.
pub fn run_trajectory(cfg: &SolverConfig, f0: &SampledField) -> Result<Trajectory> {
    let gw = diagnostics_weight(cfg, f0)?;
    run_trajectory_with_weight(cfg, f0, &gw)
}

pub fn run_trajectory_with_weight(cfg: &SolverConfig, f0: &SampledField, gw: &GridWeight) -> Result<Trajectory> {
    cfg.validate()?;
    if !f0.is_finite() {
        return Err(Error::NonFinite("initial data"));
    }
    let grid = f0.grid().clone();
    let stepper = Stepper::new(&grid, cfg)?;
    let aq = stepper.muskat().quadrature().clone();

    let mut outputs: Vec<f64> = Vec::new();
    let n_out = (cfg.t_end / cfg.output_interval).round().max(1.0) as usize;
    for k in 1..=n_out {
        let t = (k as f64 * cfg.output_interval).min(cfg.t_end);
        outputs.push(t);
    }
    if outputs.last().is_none_or(|&t| t < cfg.t_end) {
        outputs.push(cfg.t_end);
    }
    let mut snaps: Vec<f64> = cfg.snapshot_times.clone();
    snaps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    snaps.dedup();
    let mut marks: Vec<f64> = outputs.iter().chain(snaps.iter()).copied().filter(|t| *t > 0.0).collect();
    marks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    marks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));

    let (dt0, _) = cfl_dt(cfg, f0);
    let mut traj = Trajectory {
        records: alloc::vec![EnergyRecord::compute(0.0, f0, gw, &aq, dt0, cfg.eps)],
        dissipation: alloc::vec![0.0],
        states: alloc::vec![f0.clone()],
        snapshots: Vec::new(),
        steps: 0,
        rejections: 0,
        max_l2_growth: 0.0,
        outcome: Outcome::Completed,
    };
    if snaps.first() == Some(&0.0) {
        traj.snapshots.push((0.0, f0.clone()));
    }

    let mut f = f0.clone();
    let mut t = 0.0;
    let mut diss = 0.0;
    let mut c_prev = coercive_plain(f0);
    let mut mark = 0;
    let mut dt_cap = cfg.dt_max;
    while mark < marks.len() {
        if traj.steps >= cfg.max_steps {
            traj.outcome = Outcome::BlowUp { t, reason: BlowUp::StepLimit };
            break;
        }
        let (dt_cfl, slope) = cfl_dt(cfg, &f);
        if slope > cfg.blowup_slope {
            traj.outcome = Outcome::BlowUp { t, reason: BlowUp::Slope { value: slope } };
            break;
        }
        let target = marks[mark];
        let mut dt = dt_cfl.min(dt_cap);
        let hit = target - t <= dt * (1.0 + 1e-9);
        if hit {
            dt = target - t;
        }
        let e0 = f.dot(&f);
        let next = match stepper.step(&f, dt) {
            Ok(g) => Some(g),
            Err(Error::NonFinite(_)) => None,
            Err(e) => return Err(e),
        };
        let accepted = match &next {
            Some(g) => {
                let e1 = g.dot(g);
                let growth = if e0 > 0.0 { (e1 - e0) / e0 } else { e1 };
                if growth > cfg.energy_guard {
                    None
                } else {
                    traj.max_l2_growth = traj.max_l2_growth.max(growth);
                    Some(g.clone())
                }
            }
            None => None,
        };
        let Some(g) = accepted else {
            traj.rejections += 1;
            dt_cap = 0.5 * dt;
            if dt_cap < cfg.dt_min {
                let reason = if next.is_none() { BlowUp::NonFinite } else { BlowUp::StepUnderflow { dt: dt_cap } };
                traj.outcome = Outcome::BlowUp { t, reason };
                break;
            }
            continue;
        };
        dt_cap = (2.0 * dt_cap).min(cfg.dt_max);
        traj.steps += 1;
        let c_new = coercive_plain(&g);
        diss += 0.5 * (c_prev + c_new) * dt;
        c_prev = c_new;
        f = g;
        t = if hit { target } else { t + dt };
        if hit {
            if outputs.iter().any(|o| (o - target).abs() <= 1e-12 * target.max(1.0)) {
                traj.records.push(EnergyRecord::compute(t, &f, gw, &aq, dt, cfg.eps));
                traj.dissipation.push(diss);
                traj.states.push(f.clone());
            }
            if snaps.iter().any(|s| (s - target).abs() <= 1e-12 * target.max(1.0)) {
                traj.snapshots.push((t, f.clone()));
            }
            mark += 1;
        }
    }
    Ok(traj)
}

/// Trajectories for a non-increasing list of `ε` and the distances
/// `sup_t ‖f_{ε_i} − f_{ε_{i+1}}‖_{Ḣ^{1/2}}` over common output times.
#[derive(Clone, Debug)]
pub struct Continuation {
    pub eps: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
    pub cauchy: Vec<f64>,
}

pub fn check_eps_list(eps: &[f64]) -> Result<()> {
    if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter("eps list must be positive and non-increasing".into()));
    }
    Ok(())
}

/// Sup over shared record times of `‖f₁ − f₂‖_{Ḣ^{1/2}}`.
pub fn sup_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    let n = a.states.len().min(b.states.len());
    let mut d: f64 = 0.0;
    for i in 0..n {
        if (a.records[i].t - b.records[i].t).abs() > 1e-12 * a.records[i].t.max(1.0) {
            return Err(Error::InvalidParameter("trajectories have different output times".into()));
        }
        if a.states[i].grid() != b.states[i].grid() {
            return Err(Error::GridMismatch);
        }
        d = d.max(sobolev_norm(&a.states[i].sub(&b.states[i]), 0.5, true));
    }
    Ok(d)
}

/// Cauchy table of a family of runs, see [`Continuation`].
pub fn cauchy_table(trajs: &[Trajectory]) -> Result<Vec<f64>> {
    trajs.windows(2).map(|w| sup_distance(&w[0], &w[1])).collect()
}

pub fn epsilon_continuation(cfg: &SolverConfig, f0: &SampledField, eps: &[f64]) -> Result<Continuation> {
    check_eps_list(eps)?;
    let gw = diagnostics_weight(cfg, f0)?;
    let mut trajectories = Vec::with_capacity(eps.len());
    for &e in eps {
        let c = SolverConfig { eps: e, ..cfg.clone() };
        trajectories.push(run_trajectory_with_weight(&c, f0, &gw)?);
    }
    let cauchy = cauchy_table(&trajectories)?;
    Ok(Continuation { eps: eps.to_vec(), trajectories, cauchy })
}

/// Point of [`contraction_monitor`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionPoint {
    pub t: f64,
    /// `‖f₁ − f₂‖_{Ḣ^{1/2}}`
    pub distance: f64,
    /// `log(2 + Σ_k ‖f_{k,xx}/⟨f_{k,x}⟩‖_{L²})`
    pub log_factor: f64,
    /// `(log d(t_{i+1}) − log d(t_i))/(t_{i+1} − t_i)/log_factor`, zero at the last point
    /// or where `d` vanishes.
    pub gronwall: f64,
}

pub fn contraction_monitor(a: &Trajectory, b: &Trajectory) -> Result<Vec<ContractionPoint>> {
    if a.states.len() != b.states.len() {
        return Err(Error::InvalidParameter("trajectories have different output times".into()));
    }
    let mut out: Vec<ContractionPoint> = Vec::with_capacity(a.states.len());
    for i in 0..a.states.len() {
        let (fa, fb) = (&a.states[i], &b.states[i]);
        if fa.grid() != fb.grid() {
            return Err(Error::GridMismatch);
        }
        if (a.records[i].t - b.records[i].t).abs() > 1e-12 * a.records[i].t.max(1.0) {
            return Err(Error::InvalidParameter("trajectories have different output times".into()));
        }
        let distance = sobolev_norm(&fa.sub(fb), 0.5, true);
        let log_factor = (2.0 + slope_weighted_curvature(fa) + slope_weighted_curvature(fb)).ln();
        out.push(ContractionPoint { t: a.records[i].t, distance, log_factor, gronwall: 0.0 });
    }
    for i in 0..out.len().saturating_sub(1) {
        let (p, q) = (out[i], out[i + 1]);
        if p.distance > 0.0 && q.distance > 0.0 {
            out[i].gronwall = (q.distance.ln() - p.distance.ln()) / (q.t - p.t) / p.log_factor;
        }
    }
    Ok(out)
}

/// Multiplies every mode by `e^{−ℓ(ξ)t}`: the exact linear flow.
pub fn linear_flow(f: &SampledField, eps: f64, power: f64, t: f64) -> SampledField {
    f.spectrum()
        .apply_multiplier(|xi| {
            let k = xi.abs();
            Complex64::new((-(eps * k.powf(power) + k) * t).exp(), 0.0)
        })
        .expect("finite symbol")
        .to_field()
}
