//! Fourier transform of the truncated odd kernel
//! `θ_λ(α) = sign(α) ∫_{|α|}^∞ χ(s/λ) s^{−2} ds`.
//!
//! With `z = λξ`, `θ̂_λ(ξ) = −2i J(z)` where
//! `J(z) = Si(z) − (1−c₁)(1−cos z)/z + c₁ cos z/z − z^{−1}∫₁² χ(t) cos(zt) t^{−2} dt`
//! and `c₁ = ∫₁² χ(t) t^{−2} dt`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use super::{InequalityReport, VerifyConfig};
use crate::error::Result;
use crate::quadrature::{integrate, integrate_pieces, QuadConfig};

fn bump_edge(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth even cutoff, `1` on `[−1, 1]` and `0` outside `(−2, 2)`.
pub fn cutoff(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let a = bump_edge(2.0 - t);
        a / (a + bump_edge(t - 1.0))
    }
}

const CFG: QuadConfig = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-12, max_panels: 4000 };

/// Sine integral `∫₀^z sin t / t dt`.
pub fn sine_integral(z: f64) -> Result<f64> {
    if z < 0.0 {
        return Ok(-sine_integral(-z)?);
    }
    if z <= 40.0 {
        let n = (z / PI).ceil().max(1.0) as usize;
        let breaks: Vec<f64> = (0..=n).map(|k| z * k as f64 / n as f64).collect();
        return integrate_pieces(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, &breaks, CFG);
    }
    // asymptotic series, truncated before the terms start growing
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0 / z, 1.0 / (z * z));
    for n in 0..30 {
        f += tf;
        g += tg;
        let k = (2 * n + 1) as f64;
        let next_f = -tf * k * (k + 1.0) / (z * z);
        let next_g = -tg * (k + 1.0) * (k + 2.0) / (z * z);
        if next_f.abs() > tf.abs() {
            break;
        }
        tf = next_f;
        tg = next_g;
    }
    Ok(PI / 2.0 - f * z.cos() - g * z.sin())
}

/// `J(z)` with `θ̂_λ(ξ) = −2i J(λξ)`.
pub fn theta_transform(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    if z < 0.0 {
        return Ok(-theta_transform(-z)?);
    }
    let c1 = integrate(|t| cutoff(t) / (t * t), 1.0, 2.0, CFG)?;
    let n = ((z / PI).ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=n).map(|k| 1.0 + k as f64 / n as f64).collect();
    let osc = integrate_pieces(|t| cutoff(t) * (z * t).cos() / (t * t), &breaks, CFG)?;
    Ok(sine_integral(z)? - (1.0 - c1) * (1.0 - z.cos()) / z + (c1 * z.cos() - osc) / z)
}

/// `|θ̂_λ(ξ)| / min{1, λ|ξ|}`.
pub fn theta_ratio(lambda: f64, xi: f64) -> Result<f64> {
    let z = lambda * xi;
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * theta_transform(z)?.abs() / z.abs().min(1.0))
}

/// Largest `|θ̂_λ(ξ)|/min{1, λ|ξ|}` over log-spaced grid frequencies, per
/// resolution.
pub fn theta_fourier_check(lambdas: &[f64], cfg: &VerifyConfig) -> Result<InequalityReport> {
    let mut trend = Vec::new();
    let mut count = 0;
    let mut plateau = 0.0;
    for &n in &cfg.resolutions {
        let kmax = n / 2;
        let mut ks: Vec<usize> = (0..48).map(|i| ((kmax as f64).powf(i as f64 / 47.0)).round() as usize).collect();
        ks.dedup();
        let mut best: f64 = 0.0;
        for &lam in lambdas {
            for &k in &ks {
                let xi = PI * k as f64 / cfg.half_length;
                let r = theta_ratio(lam, xi)?;
                best = best.max(r);
                count += 1;
                if k == kmax {
                    plateau = r;
                }
            }
        }
        trend.push(best);
    }
    Ok(InequalityReport::new(
        "theta_kernel_fourier",
        count,
        trend,
        format!("ratio at the largest frequency {plateau:.6}, large-argument limit π"),
    ))
}
