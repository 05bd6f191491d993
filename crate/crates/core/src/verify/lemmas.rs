//! Difference-operator lemmas, the `γ(h)` weighted Hilbert and commutator
//! bounds, the `κ` comparison, and the nonlinear interpolation and
//! Lipschitz bounds, reported as empirical constants.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use super::commutators::draw_triple;
use super::fields::{log_uniform, trial_rng, FieldCoefficients};
use super::{FieldSpec, InequalityReport, VerifyConfig};
use crate::alpha::AlphaQuadrature;
use crate::diagnostics::{slope_and_interp, sobolev_norm, truncated_norm_lambda, weighted_seminorm};
use crate::error::{Error, Result};
use crate::grid_spectral::{PeriodicGrid, SampledField};
use crate::muskat::Muskat;
use crate::operators::{
    commutator_weighted_gamma, gamma_bracket, hilbert_transform, second_difference_seminorm, weighted_fraclap_spectral,
    DifferenceKind,
};
use crate::quadrature::{integrate, QuadConfig};
use crate::weights::{kappa_ratio_constant, AdmissibleWeight, GridWeight};

/// Admissible `(γ, a₁, a₂)` with derived `a₃ = a₁ + (a₂−1)/γ`, `β = (2+2γ−2a₂)/γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferenceExponents {
    pub gamma: f64,
    pub a1: f64,
    pub a2: f64,
}

impl DifferenceExponents {
    pub fn new(gamma: f64, a1: f64, a2: f64) -> Result<Self> {
        if !(gamma >= 2.0 && a2 > 1.0 && a2 < 1.0 + gamma && a1.is_finite()) {
            return Err(Error::InvalidParameter(format!("need γ ≥ 2 and 1 < a₂ < 1+γ, got ({gamma}, {a1}, {a2})")));
        }
        Ok(Self { gamma, a1, a2 })
    }

    pub fn a3(&self) -> f64 {
        self.a1 + (self.a2 - 1.0) / self.gamma
    }

    pub fn beta(&self) -> f64 {
        (2.0 + 2.0 * self.gamma - 2.0 * self.a2) / self.gamma
    }
}

pub const DIFFERENCE_TUPLES: [(f64, f64, f64); 3] = [(2.0, 0.0, 2.0), (2.0, 0.5, 1.5), (3.0, 0.0, 2.0)];

/// `λ = 2^k`, `k ∈ {−6, −3, 0, 3, 6}`.
pub const DIFFERENCE_LAMBDAS: [f64; 5] = [1.0 / 64.0, 0.125, 1.0, 8.0, 64.0];

/// `z − sin z`, accurate for small `z`.
fn z_minus_sin(z: f64) -> f64 {
    if z.abs() < 0.1 {
        let z2 = z * z;
        z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)))
    } else {
        z - z.sin()
    }
}

/// `α²|symbol|²` of the operator at `z = αξ`.
pub fn difference_symbol_sq(kind: DifferenceKind, z: f64) -> f64 {
    let s = (0.5 * z).sin();
    let c = 2.0 * s * s;
    match kind {
        DifferenceKind::Delta => 2.0 * c,
        DifferenceKind::Slope => 2.0 * c,
        DifferenceKind::E => c * c + z_minus_sin(z).powi(2),
        DifferenceKind::S => 4.0 * c * c,
    }
}

/// Nonzero `(|ξ|, |f̂|²/2L)` of a field.
fn power_spectrum(f: &SampledField) -> Vec<(f64, f64)> {
    let spec = f.spectrum();
    let g = f.grid();
    let scale = 1.0 / (2.0 * g.half_length());
    let e: Vec<(f64, f64)> = spec.coeffs().iter().enumerate().map(|(i, c)| (g.xi(i).abs(), scale * c.norm_sqr())).collect();
    let top = e.iter().fold(0.0f64, |m, t| m.max(t.1));
    e.into_iter().filter(|t| t.0 > 0.0 && t.1 > 1e-28 * top).collect()
}

/// Both sides of the small-offset bound for `E_α`, `S_α` or `δ_α`:
/// `∫_{|α|≤λ} ‖Op_α f‖^γ_{Ḣ^{a₁}} |α|^{−a₂} dα` against
/// `(Σ min{λ|ξ|,1}^β |ξ|^{2m+2a₃} |f̂|²)^{γ/2}` with `m = 1` for `E, S`, `m = 0` for `δ`.
pub fn difference_lemma_sides(f: &SampledField, kind: DifferenceKind, e: &DifferenceExponents, lambda: f64) -> Result<(f64, f64)> {
    if kind == DifferenceKind::Slope {
        return Err(Error::InvalidParameter("difference lemmas cover E, S and δ".into()));
    }
    let ps = power_spectrum(f);
    let inv = if kind == DifferenceKind::Delta { 0.0 } else { 2.0 };
    let norm_sq = |a: f64| -> f64 {
        ps.iter().map(|&(xi, p)| xi.powf(2.0 * e.a1) * difference_symbol_sq(kind, a * xi) * p).sum::<f64>() / a.powf(inv)
    };
    let cfg = QuadConfig { abs_tol: 1e-300, rel_tol: 1e-9, max_panels: 20000 };
    let xmax = ps.iter().fold(0.0f64, |m, t| m.max(t.0));
    let pieces = ((lambda * xmax / 2.0).ceil() as usize).clamp(1, 400);
    let mut lhs = 0.0;
    for k in 0..pieces {
        let a = lambda * k as f64 / pieces as f64;
        let b = lambda * (k + 1) as f64 / pieces as f64;
        lhs += integrate(|al: f64| if al == 0.0 { 0.0 } else { norm_sq(al).powf(0.5 * e.gamma) * al.powf(-e.a2) }, a, b, cfg)?;
    }
    lhs *= 2.0;
    let m = if kind == DifferenceKind::Delta { 0.0 } else { 2.0 };
    let rhs = ps.iter().map(|&(xi, p)| (lambda * xi).min(1.0).powf(e.beta()) * xi.powf(m + 2.0 * e.a3()) * p).sum::<f64>();
    Ok((lhs, rhs.powf(0.5 * e.gamma)))
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

fn draw_fields(cfg: &VerifyConfig, salt: u64) -> Vec<FieldCoefficients> {
    (0..cfg.trials)
        .map(|i| {
            let mut rng = trial_rng(cfg.seed ^ salt, i as u64);
            let amp = log_uniform(&mut rng, 0.1, 3.0);
            let fs = FieldSpec { amplitude: cfg.field.amplitude * amp, ..cfg.field };
            FieldCoefficients::draw(cfg.half_length, &fs, &mut rng)
        })
        .collect()
}

pub fn difference_lemma_suite(cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let fields = draw_fields(cfg, 0xd1ff);
    let kinds = [(DifferenceKind::E, "E"), (DifferenceKind::S, "S"), (DifferenceKind::Delta, "delta")];
    let mut out = Vec::new();
    for &(g, a1, a2) in &DIFFERENCE_TUPLES {
        let e = DifferenceExponents::new(g, a1, a2)?;
        for &(kind, label) in &kinds {
            let mut trend = Vec::new();
            for &n in &cfg.resolutions {
                let grid = PeriodicGrid::new(cfg.half_length, n)?;
                let mut best = 0.0f64;
                for c in &fields {
                    let f = c.sample(&grid);
                    for &l in &DIFFERENCE_LAMBDAS {
                        let (lhs, rhs) = difference_lemma_sides(&f, kind, &e, l)?;
                        best = best.max(ratio(lhs, rhs));
                    }
                }
                trend.push(best);
            }
            out.push(InequalityReport::new(
                &format!("difference_{label}_g{g}_a1_{a1}_a2_{a2}"),
                fields.len() * DIFFERENCE_LAMBDAS.len() * cfg.resolutions.len(),
                trend,
                format!("a3 = {}, β = {}, λ ∈ {:?}", e.a3(), e.beta(), DIFFERENCE_LAMBDAS),
            ));
        }
    }
    Ok(out)
}

/// `∫(γ(h)Hg)²` against `(1 + ‖h‖²_{Ḣ^{1/2}}) ∫(γ(h)g)²`.
pub fn weighted_hilbert_sides(h: &SampledField, g: &SampledField) -> (f64, f64) {
    let gh = h.map(gamma_bracket);
    let a = gh.mul(&hilbert_transform(g));
    let b = gh.mul(g);
    (a.dot(&a), (1.0 + sobolev_norm(h, 0.5, true).powi(2)) * b.dot(&b))
}

/// `‖[|D|^{σ,φ}, γ(h)]g‖` against `‖|D|^{1/2,φ}h‖ ‖γ(h)g‖_{Ḣ^σ}`.
pub fn gamma_commutator_sides(sigma: f64, w: &GridWeight, h: &SampledField, g: &SampledField) -> Result<(f64, f64)> {
    let lhs = commutator_weighted_gamma(sigma, w, h, g)?.l2_norm();
    let rhs = weighted_fraclap_spectral(h, 0.5, w).l2_norm() * sobolev_norm(&h.map(gamma_bracket).mul(g), sigma, true);
    Ok((lhs, rhs))
}

pub fn gamma_suite(weight: &AdmissibleWeight, cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    const SIGMA: f64 = 0.25;
    let triples: Vec<_> = (0..cfg.trials).map(|i| draw_triple(cfg, i)).collect();
    let mut tz3 = Vec::new();
    let mut tz1 = Vec::new();
    for &n in &cfg.resolutions {
        let grid = PeriodicGrid::new(cfg.half_length, n)?;
        let gw = GridWeight::new(weight, &grid)?;
        let (mut b3, mut b1) = (0.0f64, 0.0f64);
        for t in &triples {
            let h = t[0].sample(&grid);
            let g = t[1].sample(&grid);
            let (l, r) = weighted_hilbert_sides(&h, &g);
            b3 = b3.max(ratio(l, r));
            let (l, r) = gamma_commutator_sides(SIGMA, &gw, &h, &g)?;
            b1 = b1.max(ratio(l, r));
        }
        tz3.push(b3);
        tz1.push(b1);
    }
    let count = triples.len() * cfg.resolutions.len();
    Ok(alloc::vec![
        InequalityReport::new("gamma_weighted_hilbert", count, tz3, "γ(z) = ⟨z⟩^(-1)".into()),
        InequalityReport::new("gamma_weighted_commutator", count, tz1, format!("σ = {SIGMA}, γ(z) = ⟨z⟩^(-1)")),
    ])
}

/// `(λ, ξ)` samples: `k` log-spaced points each over `[10⁻³, 10³]`.
fn log_samples(k: usize) -> Vec<f64> {
    (0..k).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / (k - 1) as f64)).collect()
}

pub const KAPPA_BETAS: [f64; 3] = [0.01, 0.5, 1.0];

pub fn kappa_suite(weight: &AdmissibleWeight, cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let mut out = Vec::new();
    let densities: Vec<usize> = cfg.resolutions.iter().map(|&n| (n / 8).max(16)).collect();
    for &b in &KAPPA_BETAS {
        let trend = densities
            .iter()
            .map(|&k| {
                let s = log_samples(k);
                kappa_ratio_constant(weight, b, &s, &s)
            })
            .collect();
        out.push(InequalityReport::new(
            &format!("kappa_comparison_beta{b}"),
            densities.iter().map(|k| k * k).sum(),
            trend,
            format!("λ, ξ ∈ [1e-3, 1e3], {densities:?} points each"),
        ));
    }
    let fields = draw_fields(cfg, 0x4a99);
    let lambdas = log_samples(13);
    let mut trend = Vec::new();
    for &n in &cfg.resolutions {
        let grid = PeriodicGrid::new(cfg.half_length, n)?;
        let gw = GridWeight::new(weight, &grid)?;
        let mut best = 0.0f64;
        for c in &fields {
            let f = c.sample(&grid);
            let den = weighted_seminorm(&f, 1.5, &gw);
            for &l in &lambdas {
                best = best.max(ratio(truncated_norm_lambda(&f, l), den / weight.kappa(1.0 / l)));
            }
        }
        trend.push(best);
    }
    out.push(InequalityReport::new(
        "truncated_norm_vs_weighted",
        fields.len() * lambdas.len() * cfg.resolutions.len(),
        trend,
        "‖f‖_{Ḣ^{3/2}_λ} κ(1/λ) / ‖|D|^{3/2,φ}f‖".into(),
    ));
    Ok(out)
}

pub fn nonlinear_suite(weight: &AdmissibleWeight, cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let fields = draw_fields(cfg, 0x7e57);
    let triples: Vec<_> = (0..cfg.trials).map(|i| draw_triple(cfg, i + 10_000)).collect();
    let mut t = [Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for &n in &cfg.resolutions {
        let grid = PeriodicGrid::new(cfg.half_length, n)?;
        let gw = GridWeight::new(weight, &grid)?;
        let m = Muskat::new(&grid);
        let aq = AlphaQuadrature::standard(&grid);
        let mut best = [0.0f64; 7];
        let mut eq_min = f64::INFINITY;
        for c in &fields {
            let f = c.sample(&grid);
            let si = slope_and_interp(&f, &gw);
            best[0] = best[0].max(si.v1);
            best[1] = best[1].max(si.v10);
            best[2] = best[2].max(si.v98);
            let q = second_difference_seminorm(&f, 1.5, weight, &aq) / weighted_seminorm(&f, 1.5, &gw);
            best[6] = best[6].max(q);
            eq_min = eq_min.min(q);
        }
        for tr in &triples {
            let (f1, g) = (tr[0].sample(&grid), tr[1].sample(&grid));
            let f2 = f1.add(&tr[2].sample(&grid).scale(0.1));
            best[3] = best[3].max(ratio(m.apply_t(&f1, &g).l2_norm(), sobolev_norm(&f1, 1.0, true) * sobolev_norm(&g, 1.5, true)));
            let lr = m.lipschitz_t_difference(&f1, &f2, &g);
            best[4] = best[4].max(lr.ratio_delta0);
            best[5] = best[5].max(lr.ratio_delta_quarter);
        }
        best[6] /= eq_min;
        for k in 0..7 {
            t[k].push(best[k]);
        }
    }
    let nf = fields.len() * cfg.resolutions.len();
    let np = triples.len() * cfg.resolutions.len();
    let [t0, t1, t2, t3, t4, t5, t6] = t;
    Ok(alloc::vec![
        InequalityReport::new("interp_slope_log_h2", nf, t0, "‖f_x‖_∞ / (1 + ‖f‖ + log(2+‖f‖_{Ḣ²})^(1/2)‖f‖_{Ḣ^{3/2}})".into()),
        InequalityReport::new("interp_slope_energy", nf, t1, "‖f_x‖_∞ / ((1+A) log(2+B)^(1/2))".into()),
        InequalityReport::new("interp_weighted_h2", nf, t2, "‖|D|^{2,φ}f‖ / ((1+A) log(2+B)^(1/2) B^(1/2))".into()),
        InequalityReport::new("t_operator_l2", np, t3, "‖T(f)g‖ / (‖f‖_{Ḣ¹}‖g‖_{Ḣ^{3/2}})".into()),
        InequalityReport::new("t_lipschitz_delta0", np, t4, "‖(T(f1)−T(f2))g‖ / (‖f1−f2‖_{Ḣ¹}‖g‖_{Ḣ^{3/2}})".into()),
        InequalityReport::new("t_lipschitz_delta_quarter", np, t5, "δ = 1/4".into()),
        InequalityReport::new("second_difference_equivalence", nf, t6, "max/min of ‖f‖_{3/2,κ} / ‖|D|^{3/2,φ}f‖".into()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn derived_exponents() {
        let e = DifferenceExponents::new(2.0, 0.5, 1.5).unwrap();
        assert_eq!(e.a3(), 0.75);
        assert_eq!(e.beta(), 1.5);
        let e = DifferenceExponents::new(3.0, 0.0, 2.0).unwrap();
        assert!((e.a3() - 1.0 / 3.0).abs() < 1e-15 && (e.beta() - 4.0 / 3.0).abs() < 1e-15);
        assert!(DifferenceExponents::new(1.5, 0.0, 2.0).is_err());
        assert!(DifferenceExponents::new(2.0, 0.0, 3.0).is_err());
    }

    #[test]
    fn symbols_match_shift_operators() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let f = g.sample(|x| (3.0 * x).cos());
        let a = 0.37;
        for kind in [DifferenceKind::Delta, DifferenceKind::E, DifferenceKind::S] {
            let u = crate::operators::finite_differences(&f, a, kind).unwrap();
            let scale = if kind == DifferenceKind::Delta { 1.0 } else { a * a };
            let expect = 0.5 * 2.0 * PI * difference_symbol_sq(kind, 3.0 * a) / scale;
            assert!((u.dot(&u) - expect).abs() < 1e-12, "{kind:?}");
        }
        let z = 1e-3;
        let direct = (1.0 - z.cos()).powi(2) + (z.sin() - z).powi(2);
        assert!((difference_symbol_sq(DifferenceKind::E, z) - direct).abs() < 1e-20);
    }

    #[test]
    fn single_mode_difference_lemma() {
        // One mode: LHS = 2∫₀^λ (ξ^{2a₁}|m(αξ)|²)^{γ/2} α^{−a₂} dα in closed form for δ, γ = 2, a₂ = 2.
        let g = PeriodicGrid::new(PI, 32).unwrap();
        let f = g.sample(|x| (2.0 * x).cos());
        let e = DifferenceExponents::new(2.0, 0.0, 2.0).unwrap();
        let (l, r) = difference_lemma_sides(&f, DifferenceKind::Delta, &e, 1.0).unwrap();
        let oracle = PI * 2.0 * integrate(|a: f64| if a == 0.0 { 4.0 } else { 4.0 * (a).sin().powi(2) / (a * a) }, 0.0, 1.0, QuadConfig::default()).unwrap();
        assert!((l - oracle).abs() < 1e-8 * oracle, "{l} {oracle}");
        assert!((r - PI * 2f64.powf(1.0) * 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn gamma_trivial_cases() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let gw = GridWeight::new(&AdmissibleWeight::logarithmic().unwrap(), &g).unwrap();
        let u = g.sample(|x| x.sin() + 0.2 * (4.0 * x).cos());
        let (l, _) = gamma_commutator_sides(0.25, &gw, &g.sample(|_| 0.7), &u).unwrap();
        assert!(l < 1e-13);
        let (l, r) = weighted_hilbert_sides(&g.zeros(), &u);
        assert!((l - r).abs() < 1e-12 * r);
    }

    #[test]
    fn small_suites_bounded() {
        let cfg = VerifyConfig { trials: 3, resolutions: alloc::vec![128, 256, 512], ..VerifyConfig::default() };
        let w = AdmissibleWeight::logarithmic().unwrap();
        let mut all = difference_lemma_suite(&cfg).unwrap();
        all.extend(gamma_suite(&w, &cfg).unwrap());
        all.extend(kappa_suite(&w, &cfg).unwrap());
        all.extend(nonlinear_suite(&w, &cfg).unwrap());
        for r in &all {
            assert!(r.bounded() && r.max_ratio > 0.0 && r.max_ratio.is_finite(), "{r:?}");
        }
    }
}
