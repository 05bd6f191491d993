//! Gagliardo and Triebel–Lizorkin type double integrals, the elementary
//! difference-quotient estimates, Sobolev-type embeddings, and the Hardy and
//! Hardy–Littlewood–Sobolev inequalities.
//!
//! Differences are taken with periodic data. For `p = 2` the offset integral
//! runs over the whole line: the offsets `jh`, `j ≡ r (mod N)`, all see the
//! same difference, so they are summed in closed form through Hurwitz zeta
//! values. For `p ≠ 2` the offset is restricted to `|x − y| ≤ L`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;
use rand::Rng;

use super::fields::{trial_rng, FieldCoefficients};
use super::{InequalityReport, VerifyConfig};
use crate::alpha::AlphaQuadrature;
use crate::diagnostics::sobolev_norm;
use crate::error::{Error, Result};
use crate::grid_spectral::{PeriodicGrid, SampledField};
use crate::operators::{derivative, riesz_potential};

/// Largest grid accepted by the quadratic-cost double integrals.
pub const MAX_DOUBLE_INTEGRAL_N: usize = 4096;

const BERNOULLI: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];

/// Hurwitz zeta `Σ_{m≥0} (m + a)^{−q}` for `q > 1`, `a > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(q: f64, a: f64) -> f64 {
    const K: usize = 12;
    let mut s: f64 = (0..K).map(|m| (m as f64 + a).powf(-q)).sum();
    let x = K as f64 + a;
    s += x.powf(1.0 - q) / (q - 1.0) + 0.5 * x.powf(-q);
    let mut rising = q;
    let mut fact = 2.0;
    let mut xp = x.powf(-q - 1.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        s += b / fact * rising * xp;
        let n = 2 * k as u32 + 1;
        rising *= (q + n as f64) * (q + n as f64 + 1.0);
        fact *= ((n + 2) * (n + 3)) as f64;
        xp /= x * x;
    }
    s
}

/// `C(r) = Σ_{j ≡ r (mod N), j ≠ 0} |j|^{−q}` for `r = 0..N`.
pub fn residue_weights(n: usize, q: f64) -> Vec<f64> {
    let nf = n as f64;
    let scale = nf.powf(-q);
    (0..n)
        .map(|r| {
            if r == 0 {
                2.0 * scale * hurwitz_zeta(q, 1.0)
            } else {
                let a = r as f64 / nf;
                scale * (hurwitz_zeta(q, a) + hurwitz_zeta(q, 1.0 - a))
            }
        })
        .collect()
}

/// `∫_ℝ (1 − cos t) |t|^{−1−2s} dt = π / (Γ(1+2s) sin(πs))`.
pub fn cosine_moment(s: f64) -> f64 {
    PI / (libm::tgamma(1.0 + 2.0 * s) * (PI * s).sin())
}

/// Ratio `‖u‖²_{Ḟ^s_{2,2}} / ‖u‖²_{Ḣ^s}` for the normalization used here
/// (`f̂(ξ) = ∫ e^{−ixξ} f`, Plancherel with `1/2π`).
pub fn gagliardo_fourier_constant(s: f64) -> f64 {
    2.0 * cosine_moment(s)
}

/// `∫_{ℝ²} |Δ_α f|² dα dx / ‖f‖²_{Ḣ^{3/2}}` with `Δ_α f − f_x` in place of `Δ_α f`
/// and an extra `α^{−2}`: `∫ (2 − 2cos t + t² − 2t sin t) t^{−4} dt = 2π/3`.
pub const SLOPE_DEFECT_CONSTANT: f64 = 2.0 * PI / 3.0;

fn check_cost(n: usize) -> Result<()> {
    if n > MAX_DOUBLE_INTEGRAL_N {
        Err(Error::CostLimit(n))
    } else {
        Ok(())
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("smoothness {s} must lie in (0, 1)")))
    }
}

/// `G_s(x) = ∫_ℝ |f(x) − f(x−h)|² |h|^{−1−2s} dh` at every grid point.
pub fn difference_density(f: &SampledField, s: f64) -> Result<SampledField> {
    check_exponent(s)?;
    let n = f.values().len();
    check_cost(n)?;
    let h = f.grid().spacing();
    let q = 1.0 + 2.0 * s;
    let c = residue_weights(n, q);
    let fx = derivative(f, 1);
    let v = f.values();
    let near = 2.0 * (0.5 * h).powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let far = h.powf(1.0 - q);
    let out = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (r, cr) in c.iter().enumerate().skip(1) {
                let d = v[i] - v[(i + n - r) % n];
                acc += cr * d * d;
            }
            near * fx.values()[i].powi(2) + far * acc
        })
        .collect();
    Ok(SampledField::from_raw(f.grid(), out))
}

/// Gagliardo seminorm `‖u‖_{Ẇ^{s,p}} = (∬ |u(x)−u(y)|^p |x−y|^{−1−sp} dx dy)^{1/p}`,
/// `x` over one period. For `p = 2`, `y` runs over ℝ; otherwise over
/// `|x − y| ≤ L`. The cell `|x − y| < h/2` uses the first-order Taylor term.
pub fn gagliardo_norm(f: &SampledField, s: f64, p: f64) -> Result<f64> {
    check_exponent(s)?;
    if !(1.0..=20.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, 20]")));
    }
    if p == 2.0 {
        return Ok(difference_density(f, s)?.integral().sqrt());
    }
    let n = f.values().len();
    check_cost(n)?;
    let h = f.grid().spacing();
    let v = f.values();
    let fx = derivative(f, 1);
    let e = p * (1.0 - s);
    let near = 2.0 * (0.5 * h).powf(e) / e;
    let mut total: f64 = fx.values().iter().map(|d| near * d.abs().powf(p)).sum();
    let half = n / 2;
    for j in 1..=half {
        let w = if j == half { 1.0 } else { 2.0 } * h / (j as f64 * h).powf(1.0 + s * p);
        let sj: f64 = (0..n).map(|i| (v[i] - v[(i + n - j) % n]).abs().powf(p)).sum();
        total += w * sj;
    }
    Ok((total * h).powf(1.0 / p))
}

/// `‖f‖_{Ḟ^s_{p,2}} = ‖G_s^{1/2}‖_{L^p}`.
pub fn triebel_norm(f: &SampledField, s: f64, p: f64) -> Result<f64> {
    Ok(difference_density(f, s)?.map(|g| g.max(0.0).sqrt()).lp_norm(p))
}

/// `∬ |Δ_α f − f_x|² α^{−2} dα dx` by the paired `α`-quadrature with a
/// per-mode closure for `α` beyond the quadrature range.
pub fn slope_defect_energy(f: &SampledField, aq: &AlphaQuadrature) -> f64 {
    let g = f.grid();
    let fx = derivative(f, 1);
    let fxx = derivative(f, 2);
    let sh = aq.shifted(f);
    let v = f.values();
    let mut total: f64 = fxx.values().iter().map(|d| 2.0 * aq.weight(0) * 0.25 * d * d).sum();
    for j in 1..=aq.nodes() {
        let a = aq.alpha(j);
        let c = aq.weight(j) / (a * a);
        let s: f64 = v
            .iter()
            .zip(fx.values())
            .zip(sh.minus(j).iter().zip(sh.plus(j).iter()))
            .map(|((&u, &d), (m, p))| {
                let em = (u - m) / a - d;
                let ep = (p - u) / a - d;
                em * em + ep * ep
            })
            .sum();
        total += c * s;
    }
    let da = aq.step();
    let m = aq.nodes();
    let tail = f.spectrum().weighted_energy(|xi| {
        let xi = xi.abs();
        let t = xi * da - 2.0 * PI * (xi * da / (2.0 * PI)).floor();
        let mut c4 = PI * PI * t * t / 12.0 - PI * t.powi(3) / 12.0 + t.powi(4) / 48.0;
        let mut s3 = PI * PI * t / 6.0 - PI * t * t / 4.0 + t.powi(3) / 12.0;
        let mut z2 = PI * PI / 6.0;
        for j in 1..=m {
            let jf = j as f64;
            let jt = jf * xi * da;
            c4 -= (1.0 - jt.cos()) / jf.powi(4);
            s3 -= jt.sin() / jf.powi(3);
            z2 -= 1.0 / (jf * jf);
        }
        4.0 * c4 / da.powi(3) - 4.0 * xi * s3 / (da * da) + 2.0 * xi * xi * z2 / da
    });
    total * g.spacing() + tail
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

fn two_sided(r: f64, c: f64) -> f64 {
    (r / c).max(c / r)
}

fn draw_fields(cfg: &VerifyConfig, salt: u64) -> Vec<FieldCoefficients> {
    (0..cfg.trials)
        .map(|i| {
            let mut rng = trial_rng(cfg.seed ^ salt, i as u64);
            FieldCoefficients::draw(cfg.half_length, &cfg.field, &mut rng)
        })
        .collect()
}

type FieldCheck = fn(&SampledField) -> Result<f64>;

fn field_report(name: &str, cfg: &VerifyConfig, fields: &[FieldCoefficients], check: FieldCheck, notes: &str) -> Result<InequalityReport> {
    let mut trend = Vec::with_capacity(cfg.resolutions.len());
    for &n in &cfg.resolutions {
        let grid = PeriodicGrid::new(cfg.half_length, n)?;
        let mut best = 0.0f64;
        for c in fields {
            let r = check(&c.sample(&grid))?;
            best = if r.is_nan() { f64::NAN } else { best.max(r) };
        }
        trend.push(best);
    }
    Ok(InequalityReport::new(name, fields.len() * cfg.resolutions.len(), trend, format!("{notes}; N = {:?}", cfg.resolutions)))
}

/// `max(r/c, c/r)` for `r = ‖u‖²_{Ḟ^{1/2}_{2,2}} / ‖u‖²_{Ḣ^{1/2}}` and `c = 2π`.
pub fn half_identity_deviation(f: &SampledField) -> Result<f64> {
    let r = gagliardo_norm(f, 0.5, 2.0)?.powi(2) / sobolev_norm(f, 0.5, true).powi(2);
    Ok(two_sided(r, gagliardo_fourier_constant(0.5)))
}

fn quarter_identity_deviation(f: &SampledField) -> Result<f64> {
    let r = gagliardo_norm(f, 0.25, 2.0)?.powi(2) / sobolev_norm(f, 0.25, true).powi(2);
    Ok(two_sided(r, gagliardo_fourier_constant(0.25)))
}

fn slope_l2_check(f: &SampledField) -> Result<f64> {
    let lhs = difference_density(f, 0.5)?.integral();
    Ok(two_sided(lhs / sobolev_norm(f, 0.5, true).powi(2), gagliardo_fourier_constant(0.5)))
}

fn slope_defect_check(f: &SampledField) -> Result<f64> {
    let lhs = slope_defect_energy(f, &AlphaQuadrature::standard(f.grid()));
    Ok(two_sided(lhs / sobolev_norm(f, 1.5, true).powi(2), SLOPE_DEFECT_CONSTANT))
}

fn density_square_check(f: &SampledField) -> Result<f64> {
    let g = difference_density(f, 0.5)?;
    Ok(ratio(g.dot(&g), sobolev_norm(f, 0.75, true).powi(4)))
}

fn sobolev_l4_check(f: &SampledField) -> Result<f64> {
    Ok(ratio(f.lp_norm(4.0), sobolev_norm(f, 0.25, true)))
}

fn triebel_embedding_check(f: &SampledField) -> Result<f64> {
    Ok(ratio(triebel_norm(f, 0.25, 4.0)?, sobolev_norm(f, 0.5, true)))
}

fn gagliardo_embedding_check(f: &SampledField) -> Result<f64> {
    Ok(ratio(f.lp_norm(12.0), gagliardo_norm(f, 0.25, 3.0)?))
}

pub fn embedding_suite(cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    let fields = draw_fields(cfg, 0x0e5b);
    let checks: [(&str, FieldCheck, &str); 8] = [
        ("gagliardo_fourier_half", half_identity_deviation, "max(r/2π, 2π/r)"),
        ("gagliardo_fourier_quarter", quarter_identity_deviation, "max(r/c, c/r), c = 2∫(1−cos t)|t|^(-3/2)"),
        ("slope_l2_vs_h_half", slope_l2_check, "two-sided against 2π"),
        ("slope_defect_vs_h_threehalf", slope_defect_check, "two-sided against 2π/3"),
        ("slope_density_square_vs_h_threequarter", density_square_check, "one-sided"),
        ("sobolev_l4_vs_h_quarter", sobolev_l4_check, "one-sided"),
        ("triebel_f_quarter_4_2_vs_h_half", triebel_embedding_check, "one-sided"),
        ("l12_vs_gagliardo_quarter_3", gagliardo_embedding_check, "one-sided, |x−y| ≤ L"),
    ];
    checks
        .iter()
        .map(|(name, check, notes)| field_report(name, cfg, &fields, *check, &format!("{} fields, {notes}", fields.len())))
        .collect()
}

/// Hardy's inequality on the half-line:
/// `∫₀^∞ (x^{−1}∫₀^x f)^r x^s dx ≤ (r/(r−s−1))^r ∫₀^∞ f^r x^s dx`.
pub fn hardy_constant(r: f64, s: f64) -> f64 {
    (r / (r - s - 1.0)).powf(r)
}

/// Left and right sides of Hardy's inequality for `f ≥ 0` sampled at
/// `x_i = i·X/n` and vanishing beyond `X`; `∫_X^∞` is added in closed form.
pub fn hardy_sides(f: &[f64], x_max: f64, r: f64, s: f64) -> Result<(f64, f64)> {
    if !(r >= 1.0 && s < r - 1.0) {
        return Err(Error::InvalidParameter(format!("Hardy exponents need r ≥ 1 and s < r − 1, got ({r}, {s})")));
    }
    if f.len() < 2 || f.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidParameter("Hardy data must be non-negative samples".into()));
    }
    let n = f.len() - 1;
    let h = x_max / n as f64;
    let mut mass = 0.0;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for i in 0..=n {
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        if i > 0 {
            mass += 0.5 * h * (f[i - 1] + f[i]);
        }
        let x = i as f64 * h;
        if f[i] > 0.0 {
            rhs += w * f[i].powf(r) * x.powf(s);
        }
        if mass > 0.0 {
            lhs += w * (mass / x).powf(r) * x.powf(s);
        }
    }
    lhs += mass.powf(r) * x_max.powf(s - r + 1.0) / (r - s - 1.0);
    Ok((lhs, rhs))
}

fn smooth_bump(x: f64, c: f64, w: f64) -> f64 {
    let t = (x - c) / w;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Non-negative sum of one to four bumps supported in `[0.5, 4.5]`.
fn hardy_profile<R: Rng>(rng: &mut R) -> Vec<(f64, f64, f64)> {
    let k = rng.random_range(1..=4);
    (0..k)
        .map(|_| {
            let w = rng.random_range(0.05..1.0);
            let c = rng.random_range(0.5 + w..4.5 - w);
            (c, w, rng.random_range(0.1..2.0))
        })
        .collect()
}

pub const HARDY_EXPONENTS: [(f64, f64); 3] = [(2.0, 0.0), (3.0, 1.0), (1.5, -0.5)];

/// Pairs `(s, p)` with `q = p/(1 − sp)`.
pub const RIESZ_EXPONENTS: [(f64, f64); 2] = [(0.25, 1.6), (0.5, 1.5)];

pub fn hardy_riesz_suite(cfg: &VerifyConfig) -> Result<Vec<InequalityReport>> {
    const X: f64 = 5.0;
    let profiles: Vec<_> = (0..cfg.trials).map(|i| hardy_profile(&mut trial_rng(cfg.seed ^ 0x4a2d, i as u64))).collect();
    let mut out = Vec::new();
    for &(r, s) in &HARDY_EXPONENTS {
        let mut trend = Vec::new();
        for &n in &cfg.resolutions {
            let mut best = 0.0f64;
            for p in &profiles {
                let f: Vec<f64> = (0..=n)
                    .map(|i| {
                        let x = i as f64 * X / n as f64;
                        p.iter().map(|&(c, w, a)| a * smooth_bump(x, c, w)).sum()
                    })
                    .collect();
                let (l, rh) = hardy_sides(&f, X, r, s)?;
                best = best.max(ratio(l, rh));
            }
            trend.push(best);
        }
        let c = hardy_constant(r, s);
        out.push(
            InequalityReport::new(
                &format!("hardy_r{r}_s{s}"),
                profiles.len() * cfg.resolutions.len(),
                trend,
                format!("{} bump profiles on [0, {X}], constant {c}", profiles.len()),
            )
            .with_explicit_constant(c),
        );
    }
    let fields = draw_fields(cfg, 0x61e5);
    for &(s, p) in &RIESZ_EXPONENTS {
        let q = p / (1.0 - s * p);
        let mut trend = Vec::new();
        for &n in &cfg.resolutions {
            let grid = PeriodicGrid::new(cfg.half_length, n)?;
            let mut best = 0.0f64;
            for c in &fields {
                let u = c.sample(&grid);
                best = best.max(ratio(riesz_potential(&u, s)?.lp_norm(q), u.lp_norm(p)));
            }
            trend.push(best);
        }
        out.push(InequalityReport::new(
            &format!("riesz_s{s}_p{p}_q{q:.4}"),
            fields.len() * cfg.resolutions.len(),
            trend,
            format!("‖|D|^(-s)u‖_q / ‖u‖_p over {} fields", fields.len()),
        ));
    }
    Ok(out)
}
