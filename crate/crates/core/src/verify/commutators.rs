//! Ratios for the three commutator and remainder estimates that drive the
//! energy estimate: the Hilbert commutator with `W(f)`, the remainder
//! `R(f)`, and the commutator of `|D|^{1,φ}` with `T(f)`.
//!
//! The scale `λ` is `B^{−1/2}` with `B` the coercive quantity of `f`.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use super::fields::{log_uniform, trial_rng, FieldCoefficients};
use super::{InequalityReport, VerifyConfig};
use crate::diagnostics::{coercive_b, sobolev_norm, truncated_norm_lambda, weighted_seminorm};
use crate::error::Result;
use crate::grid_spectral::{PeriodicGrid, SampledField};
use crate::muskat::Muskat;
use crate::operators::{derivative, hilbert_transform, weighted_fraclap_spectral};
use crate::weights::{AdmissibleWeight, GridWeight};

/// Both sides of one estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// `‖u/⟨f_x⟩‖_{L²}`.
fn slope_weighted(u: &SampledField, fx: &SampledField) -> f64 {
    u.zip_with(fx, |a, b| a * a / (1.0 + b * b)).integral().sqrt()
}

/// `B^{−1/2}` with a cap for vanishing `B`.
pub fn default_scale(f: &SampledField, w: &GridWeight) -> f64 {
    let b = coercive_b(f, w);
    if b > 0.0 {
        1.0 / b.sqrt()
    } else {
        f64::MAX.sqrt()
    }
}

/// `|⟨[H, W(f)](g_x), h⟩|` against
/// `λ^{−1/2}‖f‖_{Ḣ^{3/2}}‖g‖_{Ḣ^{1/2}}‖h‖ + (1+‖f‖^7_{Ḣ^{3/2}})‖f‖_{Ḣ^{3/2}_λ}‖g_x/⟨f_x⟩‖‖h/⟨f_x⟩‖`.
pub fn hilbert_commutator_sides(m: &Muskat, f: &SampledField, g: &SampledField, h: &SampledField, lambda: f64) -> Sides {
    let w = m.compute_w(f);
    let gx = derivative(g, 1);
    let c = hilbert_transform(&w.mul(&gx)).sub(&w.mul(&hilbert_transform(&gx)));
    let lhs = c.dot(h).abs();
    let fx = derivative(f, 1);
    let f32 = sobolev_norm(f, 1.5, true);
    let rhs = f32 * sobolev_norm(g, 0.5, true) * h.l2_norm() / lambda.sqrt()
        + (1.0 + f32.powi(7)) * truncated_norm_lambda(f, lambda) * slope_weighted(&gx, &fx) * slope_weighted(h, &fx);
    Sides { lhs, rhs }
}

/// `|⟨R(f)g, h⟩|` against
/// `(1+‖f‖²_{Ḣ^{3/2}})‖f‖_{Ḣ^{3/2}_λ}‖g_x/⟨f_x⟩‖‖h/⟨f_x⟩‖ + λ^{−1/2}‖g‖_{Ḣ^{1/2}}‖f‖²_{Ḣ^{3/2}}‖h‖`.
pub fn remainder_sides(m: &Muskat, f: &SampledField, g: &SampledField, h: &SampledField, lambda: f64) -> Sides {
    let lhs = m.apply_r(f, g).dot(h).abs();
    let fx = derivative(f, 1);
    let gx = derivative(g, 1);
    let f32 = sobolev_norm(f, 1.5, true);
    let rhs = (1.0 + f32 * f32) * truncated_norm_lambda(f, lambda) * slope_weighted(&gx, &fx) * slope_weighted(h, &fx)
        + sobolev_norm(g, 0.5, true) * f32 * f32 * h.l2_norm() / lambda.sqrt();
    Sides { lhs, rhs }
}

/// `|⟨[|D|^{1,φ}, T(f)]g, h⟩|` against
/// `(1+‖|D|^{3/2,φ}f‖⁵)(‖|D|^{3/2,φ}g‖‖f_xx/⟨f_x⟩‖ + ‖|D|^{3/2,φ}f‖‖g_xx/⟨f_x⟩‖)‖h/⟨f_x⟩‖`.
pub fn weighted_commutator_sides(m: &Muskat, w: &GridWeight, f: &SampledField, g: &SampledField, h: &SampledField) -> Sides {
    let a = weighted_fraclap_spectral(&m.apply_t(f, g), 1.0, w);
    let b = m.apply_t(f, &weighted_fraclap_spectral(g, 1.0, w));
    let lhs = a.sub(&b).dot(h).abs();
    let fx = derivative(f, 1);
    let nf = weighted_seminorm(f, 1.5, w);
    let rhs = (1.0 + nf.powi(5))
        * (weighted_seminorm(g, 1.5, w) * slope_weighted(&derivative(f, 2), &fx)
            + nf * slope_weighted(&derivative(g, 2), &fx))
        * slope_weighted(h, &fx);
    Sides { lhs, rhs }
}

/// Random `(f, g, h)` for trial `i`; `f` has a log-uniform amplitude factor.
pub(crate) fn draw_triple(cfg: &VerifyConfig, i: usize) -> [FieldCoefficients; 3] {
    let mut rng = trial_rng(cfg.seed, i as u64);
    let amp = log_uniform(&mut rng, 0.1, 3.0);
    let fs = super::FieldSpec { amplitude: cfg.field.amplitude * amp, ..cfg.field };
    [
        FieldCoefficients::draw(cfg.half_length, &fs, &mut rng),
        FieldCoefficients::draw(cfg.half_length, &cfg.field, &mut rng),
        FieldCoefficients::draw(cfg.half_length, &cfg.field, &mut rng),
    ]
}

pub fn commutator_estimate_suite(weight: &AdmissibleWeight, cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let triples: Vec<_> = (0..cfg.trials).map(|i| draw_triple(cfg, i)).collect();
    let mut trends = [Vec::new(), Vec::new(), Vec::new()];
    for &n in &cfg.resolutions {
        let grid = PeriodicGrid::new(cfg.half_length, n)?;
        let m = Muskat::new(&grid);
        let gw = GridWeight::new(weight, &grid)?;
        let mut best = [0.0f64; 3];
        for t in &triples {
            let [f, g, h] = [t[0].sample(&grid), t[1].sample(&grid), t[2].sample(&grid)];
            let lam = default_scale(&f, &gw);
            let r = [
                hilbert_commutator_sides(&m, &f, &g, &h, lam).ratio(),
                remainder_sides(&m, &f, &g, &h, lam).ratio(),
                weighted_commutator_sides(&m, &gw, &f, &g, &h).ratio(),
            ];
            for k in 0..3 {
                best[k] = if r[k].is_nan() { f64::NAN } else { best[k].max(r[k]) };
            }
        }
        for k in 0..3 {
            trends[k].push(best[k]);
        }
    }
    let names = ["hilbert_w_commutator", "remainder_r", "weighted_t_commutator"];
    let notes = format!("{} trials, N = {:?}, λ = B^(-1/2)", cfg.trials, cfg.resolutions);
    Ok(names
        .iter()
        .zip(trends)
        .map(|(nm, tr)| InequalityReport::new(nm, cfg.trials * cfg.resolutions.len(), tr, notes.clone()))
        .collect())
}
