//! Pointwise algebraic inequalities on random real triples.

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use super::fields::{log_uniform, trial_rng};
use super::InequalityReport;
use crate::muskat::Saturation;

/// Ratio of `|(x₁+x₂)/(2⟨x₁⟩²⟨x₂⟩²) − x/⟨x⟩⁴|` to
/// `⟨x⟩^{−2}(|x₁−x|² + |x₂−x|² + |x₁−x| + |x₂−x|)`.
pub fn midpoint_slope_ratio(x: f64, x1: f64, x2: f64) -> f64 {
    let (d1, d2) = ((x1 - x).abs(), (x2 - x).abs());
    let den = (d1 * d1 + d2 * d2 + d1 + d2) / (1.0 + x * x);
    if den == 0.0 {
        return 0.0;
    }
    let p = (1.0 + x1 * x1) * (1.0 + x2 * x2);
    let q = (1.0 + x * x) * (1.0 + x * x);
    let m = ((x1 + x2) / (2.0 * p) - x / q).abs();
    m / den
}

/// Ratio of `|Σ − 2x₁(2x₁−x₂−x₃)/⟨x₁⟩⁴|` to
/// `⟨x₁⟩^{−2}(d₂² + d₃² + d₂³ + d₃³)`, `Σ = 2B(x₁) − B(x₂) − B(x₃)`.
pub fn saturation_second_difference_ratio(x1: f64, x2: f64, x3: f64) -> f64 {
    let (d2, d3) = ((x1 - x2).abs(), (x1 - x3).abs());
    let den = (d2 * d2 + d3 * d3 + d2 * d2 * d2 + d3 * d3 * d3) / (1.0 + x1 * x1);
    if den == 0.0 {
        return 0.0;
    }
    let diff = |a: f64, b: f64| (a - b) * (a + b) / ((1.0 + a * a) * (1.0 + b * b));
    let sigma = diff(x1, x2) + diff(x1, x3);
    let b1 = 1.0 + x1 * x1;
    let lin = 2.0 * x1 * ((x1 - x2) + (x1 - x3)) / (b1 * b1);
    (sigma - lin).abs() / den
}

/// `|B(u) − B(v)| / ((|u−v| + |u−v|²)/⟨u⟩²)`.
pub fn saturation_lipschitz_ratio(u: f64, v: f64) -> f64 {
    let den = Saturation::lipschitz_bound(u, v);
    if den == 0.0 {
        return 0.0;
    }
    let diff = (u - v) * (u + v) / ((1.0 + u * u) * (1.0 + v * v));
    diff.abs() / den
}

fn signed<R: Rng>(rng: &mut R, v: f64) -> f64 {
    if rng.random::<bool>() {
        v
    } else {
        -v
    }
}

/// A random point of `[−10⁶, 10⁶]`, log-uniform in magnitude.
fn point<R: Rng>(rng: &mut R) -> f64 {
    let m = log_uniform(rng, 1e-6, 1e6);
    signed(rng, m)
}

/// Triples mixing independent points with clusters around a base point.
fn triple<R: Rng>(rng: &mut R) -> [f64; 3] {
    let x = point(rng);
    if rng.random::<bool>() {
        [x, point(rng), point(rng)]
    } else {
        let scale = x.abs().max(1.0);
        let mut near = || {
            let d = log_uniform(rng, 1e-8, 1e2) * scale;
            (x + signed(rng, d)).clamp(-1e6, 1e6)
        };
        [x, near(), near()]
    }
}

fn corners() -> Vec<[f64; 3]> {
    let vals = [0.0, 1.0, -1.0, 0.5, -0.5, 1e-6, -1e-6, 1e6, -1e6];
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Sample-doubling study of the three pointwise inequalities. The trend
/// holds the largest ratio over the first `n/4`, `n/2` and `n` samples.
pub fn pointwise_lemma_suite(samples: usize, seed: u64) -> Vec<InequalityReport> {
    let mut rng = trial_rng(seed, 0);
    let pts: Vec<[f64; 3]> = (0..samples).map(|_| triple(&mut rng)).collect();
    let cs = corners();
    type Ratio = fn([f64; 3]) -> f64;
    let checks: [(&str, Ratio); 3] = [
        ("midpoint_slope", |t| midpoint_slope_ratio(t[0], t[1], t[2])),
        ("saturation_second_difference", |t| saturation_second_difference_ratio(t[0], t[1], t[2])),
        ("saturation_lipschitz", |t| saturation_lipschitz_ratio(t[0], t[1])),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            let base = cs.iter().map(|&t| f(t)).fold(0.0, f64::max);
            let ratios: Vec<f64> = pts.iter().map(|&t| f(t)).collect();
            let trend: Vec<f64> = [samples / 4, samples / 2, samples]
                .iter()
                .map(|&n| ratios[..n].iter().copied().fold(base, f64::max))
                .collect();
            let r = InequalityReport::new(
                name,
                samples + cs.len(),
                trend,
                format!("{} corner triples, seed {seed}", cs.len()),
            );
            if *name == "saturation_lipschitz" {
                r.with_explicit_constant(1.0)
            } else {
                r
            }
        })
        .collect()
}
