//! Norms and energy functionals.
//!
//! Plancherel sums use `‖u‖²_{Ḣ^s} = (1/2L) Σ_k |ξ_k|^{2s} |f̂_k|²`, the
//! discrete form of `(2π)^{-1}∫ |ξ|^{2s}|f̂(ξ)|² dξ`. Integrals in `x` are
//! trapezoid sums.

use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaQuadrature;
use crate::grid_spectral::SampledField;
use crate::operators::{derivative, weighted_fraclap_spectral};
use crate::weights::GridWeight;

/// `‖f‖_{Ḣ^s}` (homogeneous) or `‖f‖_{H^s}` with weight `(1+ξ²)^s`.
pub fn sobolev_norm(f: &SampledField, s: f64, homogeneous: bool) -> f64 {
    let spec = f.spectrum();
    let e = if homogeneous {
        spec.weighted_energy(|xi| if xi == 0.0 { 0.0 } else { xi.abs().powf(2.0 * s) })
    } else {
        spec.weighted_energy(|xi| (1.0 + xi * xi).powf(s))
    };
    e.sqrt()
}

/// `‖|D|^{s,φ} f‖_{L²}`.
pub fn weighted_seminorm(f: &SampledField, s: f64, w: &GridWeight) -> f64 {
    let sym = w.symbol(s);
    let spec = f.spectrum();
    let scale = 1.0 / (2.0 * f.grid().half_length());
    (scale * spec.coeffs().iter().zip(&sym).map(|(c, m)| m * m * c.norm_sqr()).sum::<f64>()).sqrt()
}

/// `‖f‖_{L²} + ‖|D|^{s,φ} f‖_{L²}`.
pub fn weighted_norm(f: &SampledField, s: f64, w: &GridWeight) -> f64 {
    f.l2_norm() + weighted_seminorm(f, s, w)
}

/// `B = ∫ (|D|^{2,φ} f)² / (1 + f_x²) dx`.
pub fn coercive_b(f: &SampledField, w: &GridWeight) -> f64 {
    let d = weighted_fraclap_spectral(f, 2.0, w);
    let fx = derivative(f, 1);
    d.zip_with(&fx, |a, b| a * a / (1.0 + b * b)).integral()
}

/// `∫ f_xx² / (1 + f_x²) dx`.
pub fn coercive_plain(f: &SampledField) -> f64 {
    let fx = derivative(f, 1);
    let fxx = derivative(f, 2);
    fxx.zip_with(&fx, |a, b| a * a / (1.0 + b * b)).integral()
}

/// `‖f_xx/⟨f_x⟩‖_{L²}`.
pub fn slope_weighted_curvature(f: &SampledField) -> f64 {
    coercive_plain(f).sqrt()
}

/// `(1/π) ∬ log √(1 + (Δ_α f)²) dα dx`, the dissipation in
/// `(1/2) d/dt ‖f‖²_{L²} = −⟨|D|f − T(f)f, f⟩`.
///
/// Nodes beyond the quadrature range are closed by the quadratic term of
/// `log√(1+s²) = s²/2 + O(s⁴)`.
pub fn lyapunov_log(f: &SampledField, aq: &AlphaQuadrature) -> f64 {
    let h = f.grid().spacing();
    let fx = derivative(f, 1);
    let ls = |s: f64| 0.5 * (s * s).ln_1p();
    let mut total = 2.0 * aq.weight(0) * fx.values().iter().map(|&u| ls(u)).sum::<f64>();
    let sh = aq.shifted(f);
    for j in 1..=aq.nodes() {
        let inv = 1.0 / aq.alpha(j);
        let s: f64 = f
            .values()
            .iter()
            .zip(sh.plus(j).iter())
            .zip(sh.minus(j).iter())
            .map(|((&c, &p), &m)| ls((c - m) * inv) + ls((p - c) * inv))
            .sum();
        total += aq.weight(j) * s;
    }
    let q = aq.quad_tail_symbol();
    let spec = f.spectrum();
    let scale = 1.0 / (2.0 * f.grid().half_length());
    let tail: f64 = scale * spec.coeffs().iter().zip(q).map(|(c, t)| c.norm_sqr() * t).sum::<f64>();
    (total * h + 2.0 / aq.step() * tail) / PI
}

/// `(Σ min{λ|ξ|,1}^{1/100} |ξ|³ |f̂|²)^{1/2}`.
pub fn truncated_norm_lambda(f: &SampledField, lambda: f64) -> f64 {
    f.spectrum().weighted_energy(|xi| (lambda * xi.abs()).min(1.0).powf(0.01) * xi.abs().powi(3)).sqrt()
}

/// Sup-slope and interpolation ratios.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeInterp {
    pub sup_slope: f64,
    /// `‖f_x‖_∞ / (1 + ‖f‖_{L²} + log(2+‖f‖_{Ḣ²})^{1/2} ‖f‖_{Ḣ^{3/2}})`
    pub v1: f64,
    /// `‖f_x‖_∞ / ((1+A) log(2+B)^{1/2})`
    pub v10: f64,
    /// `‖|D|^{2,φ}f‖_{L²} / ((1+A) log(2+B)^{1/2} B^{1/2})`
    pub v98: f64,
}

pub fn slope_and_interp(f: &SampledField, w: &GridWeight) -> SlopeInterp {
    let sup = derivative(f, 1).max_abs();
    let l2 = f.l2_norm();
    let v1 = sup / (1.0 + l2 + (2.0 + sobolev_norm(f, 2.0, true)).ln().sqrt() * sobolev_norm(f, 1.5, true));
    let a = l2 * l2 + weighted_seminorm(f, 1.5, w).powi(2);
    let b = coercive_b(f, w);
    let lg = (2.0 + b).ln().sqrt();
    let v10 = sup / ((1.0 + a) * lg);
    let d2 = weighted_seminorm(f, 2.0, w);
    let v98 = if b > 0.0 { d2 / ((1.0 + a) * lg * b.sqrt()) } else { 0.0 };
    SlopeInterp { sup_slope: sup, v1, v10, v98 }
}

/// Version of the column layout written by [`EnergyRecord::csv_row`].
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str =
    "t,L2,H_half,H_threehalf,H_threehalf_phi,A,B,coercive_plain,lyapunov,sup_slope,dt,eps";

/// Energy functionals at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub t: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "H_half")]
    pub h_half: f64,
    #[serde(rename = "H_threehalf")]
    pub h_threehalf: f64,
    #[serde(rename = "H_threehalf_phi")]
    pub h_threehalf_phi: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub coercive_plain: f64,
    pub lyapunov: f64,
    pub sup_slope: f64,
    pub dt: f64,
    pub eps: f64,
}

impl EnergyRecord {
    pub fn compute(t: f64, f: &SampledField, w: &GridWeight, aq: &AlphaQuadrature, dt: f64, eps: f64) -> Self {
        let l2 = f.l2_norm();
        let hp = weighted_seminorm(f, 1.5, w);
        Self {
            t,
            l2,
            h_half: sobolev_norm(f, 0.5, true),
            h_threehalf: sobolev_norm(f, 1.5, true),
            h_threehalf_phi: hp,
            a: l2 * l2 + hp * hp,
            b: coercive_b(f, w),
            coercive_plain: coercive_plain(f),
            lyapunov: lyapunov_log(f, aq),
            sup_slope: derivative(f, 1).max_abs(),
            dt,
            eps,
        }
    }

    pub fn as_array(&self) -> [f64; 12] {
        [
            self.t,
            self.l2,
            self.h_half,
            self.h_threehalf,
            self.h_threehalf_phi,
            self.a,
            self.b,
            self.coercive_plain,
            self.lyapunov,
            self.sup_slope,
            self.dt,
            self.eps,
        ]
    }

    /// Values in [`CSV_HEADER`] order, round-trip exact.
    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.as_array().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{v:e}"));
        }
        s
    }

    pub fn all_nonnegative(&self) -> bool {
        self.as_array().iter().all(|v| *v >= 0.0)
    }
}

/// Right side of the main a priori estimate,
/// `κ(1/λ)^{-1}(1+A)⁴B + (1+A)³B^{1/2}‖f_xx/⟨f_x⟩‖ + λ^{-1/2}(1+A)^{3/2}‖|D|^{2,φ}f‖`,
/// with the scale `λ = B^{-1/2}`.
pub fn main_estimate_rhs(f: &SampledField, w: &GridWeight) -> f64 {
    let l2 = f.l2_norm();
    let a = l2 * l2 + weighted_seminorm(f, 1.5, w).powi(2);
    let b = coercive_b(f, w);
    if b == 0.0 {
        return 0.0;
    }
    let lambda = 1.0 / b.sqrt();
    let k = w.weight().kappa(1.0 / lambda);
    (1.0 + a).powi(4) * b / k
        + (1.0 + a).powi(3) * b.sqrt() * slope_weighted_curvature(f)
        + (1.0 + a).powf(1.5) * weighted_seminorm(f, 2.0, w) / lambda.sqrt()
}

/// Ratios `(dA/dt + B)/RHS` between consecutive records, with the
/// `RHS` of [`main_estimate_rhs`] evaluated at the later state.
pub fn main_estimate_slack(a0: f64, a1: f64, dt: f64, b1: f64, rhs1: f64) -> f64 {
    let lhs = (a1 - a0) / dt + b1;
    if rhs1 == 0.0 {
        if lhs <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs1
    }
}
