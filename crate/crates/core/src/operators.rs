//! Linear operators: derivatives, fractional and weighted fractional
//! Laplacians, the Hilbert transform, Riesz potentials, finite differences
//! and two commutators.
//!
//! Convention: the Hilbert transform has symbol `−i·sign(ξ)`, so that
//! `∂_x H = |D|` and `H cos(kx) = sin(kx)` for `k > 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::alpha::{cosine_tail, AlphaQuadrature};
use crate::error::{Error, Result};
use crate::grid_spectral::SampledField;
use crate::quadrature::{integrate, integrate_pieces, QuadConfig};
use crate::weights::{AdmissibleWeight, GridWeight};

/// Description of a Fourier-multiplier operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum OperatorSpec {
    FractionalLaplacian { s: f64 },
    Weighted { s: f64 },
    Hilbert,
    Riesz { s: f64 },
    Derivative { order: u32 },
}

/// Sign convention of the Hilbert symbol, `−i·sign(ξ)`.
pub const HILBERT_SYMBOL_SIGN: f64 = -1.0;

/// `∂_x^order f`; the Nyquist mode is dropped for odd orders.
pub fn derivative(f: &SampledField, order: u32) -> SampledField {
    let s = f.spectrum().apply_multiplier(|xi| Complex64::new(0.0, xi).powu(order)).expect("finite symbol");
    if order % 2 == 1 {
        s.zero_nyquist().to_field()
    } else {
        s.to_field()
    }
}

/// `|D|^s f`, symbol `|ξ|^s`.
pub fn fractional_laplacian(f: &SampledField, s: f64) -> SampledField {
    if s == 0.0 {
        return f.clone();
    }
    f.spectrum().apply_real(|xi| if xi == 0.0 { 0.0 } else { xi.abs().powf(s) }).to_field()
}

/// `|D|^{s,φ} f`, symbol `|ξ|^s φ(|ξ|)`.
pub fn weighted_fraclap_spectral(f: &SampledField, s: f64, w: &GridWeight) -> SampledField {
    debug_assert!(f.grid() == w.grid());
    f.spectrum().apply_table(&w.symbol(s)).to_field()
}

/// `H f`, symbol `−i·sign(ξ)`, Nyquist mode dropped.
pub fn hilbert_transform(f: &SampledField) -> SampledField {
    f.spectrum()
        .apply_multiplier(|xi| {
            let sgn = if xi > 0.0 { 1.0 } else if xi < 0.0 { -1.0 } else { 0.0 };
            Complex64::new(0.0, HILBERT_SYMBOL_SIGN * sgn)
        })
        .expect("finite symbol")
        .zero_nyquist()
        .to_field()
}

/// `H u = −(1/π) pv∫ Δ_α u dα` by the paired `α`-quadrature; `closure`
/// adds the continuation of the sum beyond `α = extent·L`.
pub fn hilbert_quadrature(u: &SampledField, aq: &AlphaQuadrature, closure: bool) -> SampledField {
    let n = u.grid().len();
    let ux = derivative(u, 1);
    let sh = aq.shifted(u);
    let mut acc: Vec<f64> = ux.values().iter().map(|v| 2.0 * aq.weight(0) * v).collect();
    for j in 1..=aq.nodes() {
        let c = aq.weight(j) / aq.alpha(j);
        for ((a, p), m) in acc.iter_mut().zip(sh.plus(j).iter()).zip(sh.minus(j).iter()) {
            *a += c * (p - m);
        }
    }
    let mut out = SampledField::from_raw(u.grid(), acc).scale(-1.0 / PI);
    if closure {
        out = out.sub(&aq.pv_tail(u));
    }
    debug_assert_eq!(out.values().len(), n);
    out
}

/// Riesz potential `|D|^{−s} f` on the zero-mean part, `0 < s < 1`.
pub fn riesz_potential(f: &SampledField, s: f64) -> Result<SampledField> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter("Riesz exponent must lie in (0, 1)".into()));
    }
    Ok(f.spectrum().apply_real(|xi| if xi == 0.0 { 0.0 } else { xi.abs().powf(-s) }).to_field())
}

/// Kinds accepted by [`finite_differences`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DifferenceKind {
    /// `δ_α f = f(x) − f(x − α)`
    Delta,
    /// `Δ_α f = δ_α f / α`
    Slope,
    /// `E_α f = Δ_α f − f_x`
    E,
    /// `S_α f = Δ_α f − Δ_{−α} f`
    S,
}

/// `u(x − a)` by trigonometric interpolation.
pub fn shift(u: &SampledField, a: f64) -> SampledField {
    u.spectrum()
        .apply_multiplier(|xi| {
            let p = -xi * a;
            Complex64::new(p.cos(), p.sin())
        })
        .expect("finite symbol")
        .to_field()
}

pub fn finite_differences(f: &SampledField, alpha: f64, kind: DifferenceKind) -> Result<SampledField> {
    if alpha == 0.0 && kind != DifferenceKind::Delta {
        return Err(Error::ZeroOffset);
    }
    let delta = f.sub(&shift(f, alpha));
    Ok(match kind {
        DifferenceKind::Delta => delta,
        DifferenceKind::Slope => delta.scale(1.0 / alpha),
        DifferenceKind::E => delta.scale(1.0 / alpha).sub(&derivative(f, 1)),
        DifferenceKind::S => {
            let back = f.sub(&shift(f, -alpha)).scale(-1.0 / alpha);
            delta.scale(1.0 / alpha).sub(&back)
        }
    })
}

/// `[H, g1](∂_x g2) = H(g1 ∂_x g2) − g1 H(∂_x g2)`.
pub fn commutator_hilbert_fn(g1: &SampledField, g2: &SampledField) -> SampledField {
    let d = derivative(g2, 1);
    hilbert_transform(&g1.mul(&d)).sub(&g1.mul(&hilbert_transform(&d)))
}

/// `γ(z) = ⟨z⟩^{−1} = (1 + z²)^{−1/2}`.
pub fn gamma_bracket(z: f64) -> f64 {
    1.0 / (1.0 + z * z).sqrt()
}

/// `|D|^{σ,φ}(γ(h) g) − γ(h) |D|^{σ,φ} g` with `γ(z) = ⟨z⟩^{−1}`.
pub fn commutator_weighted_gamma(
    sigma: f64,
    w: &GridWeight,
    h: &SampledField,
    g: &SampledField,
) -> Result<SampledField> {
    if !(sigma > 0.0 && sigma < 0.5) {
        return Err(Error::InvalidParameter("σ must lie in (0, 1/2)".into()));
    }
    let gh = h.map(gamma_bracket);
    Ok(weighted_fraclap_spectral(&gh.mul(g), sigma, w).sub(&gh.mul(&weighted_fraclap_spectral(g, sigma, w))))
}

/// Precomputed quadrature weights for the kernel form of `|D|^{1,φ}`,
/// `(1/4)∫ (2g(x) − g(x+α) − g(x−α))/α² κ(1/|α|) dα`.
#[derive(Clone, Debug)]
pub struct KernelWeight {
    aq: AlphaQuadrature,
    node_weights: Vec<f64>,
    tail: Vec<f64>,
}

/// Nodes near `α = 0` that use product-integration weights `∫ hat_j κ(1/α)`.
const PRODUCT_NODES: usize = 32;
/// Far-field correction terms `κ(1/α_j) − κ(0)` are summed up to
/// `j = TAIL_FACTOR·M` and closed by `∫ (κ(1/α) − κ(0))/α² dα` beyond.
const TAIL_FACTOR: usize = 8;

impl KernelWeight {
    pub fn new(weight: &AdmissibleWeight, aq: &AlphaQuadrature) -> Result<Self> {
        let da = aq.step();
        let m = aq.nodes();
        let k = |a: f64| weight.kappa(1.0 / a);
        let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-12, max_panels: 4000 };
        let p = PRODUCT_NODES.min(m.saturating_sub(3));
        let mut node_weights: Vec<f64> = (0..=m).map(|j| if j > p { da * k(aq.alpha(j)) } else { 0.0 }).collect();
        // Cells below `α_p`: product integration of `κ(1/α)` against the
        // cubic interpolant of the (even) integrand through nodes `j−1..j+2`.
        let basis: [fn(f64) -> f64; 4] = [
            |s| -s * (s - 1.0) * (s - 2.0) / 6.0,
            |s| (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            |s| -(s + 1.0) * s * (s - 2.0) / 2.0,
            |s| (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        for j in 0..p {
            let aj = aq.alpha(j);
            for (q, l) in basis.iter().enumerate() {
                let v = integrate(|a| l((a - aj) / da) * k(a), aj, aj + da, cfg)?;
                let node = (j as i64 + q as i64 - 1).unsigned_abs() as usize;
                node_weights[node] += v;
            }
        }
        if p < m {
            // Trapezoid from `α_p` with a third-order end correction.
            node_weights[p] += 0.5 * da * k(aq.alpha(p)) - da / 8.0 * k(aq.alpha(p));
            node_weights[p + 1] += da / 6.0 * k(aq.alpha(p + 1));
            node_weights[p + 2] -= da / 24.0 * k(aq.alpha(p + 2));
        }
        let grid = aq.grid();
        let k0 = weight.kappa(0.0);
        let last = TAIL_FACTOR * m;
        let mut far: Vec<f64> = ((m + 1)..=last).map(|j| k(aq.alpha(j)) - k0).collect();
        // Trapezoid error at each kink of `κ(1/α)`, applied to the two
        // surrounding nodes as `J Δα² (t(1−t) − 1/6)/2` split linearly (the
        // endpoint terms are handled separately).
        for &r in weight.r_grid.iter().filter(|&&r| r > 0.0) {
            let c = 1.0 / r;
            let pos = c / da;
            let j0 = pos.floor() as usize;
            if j0 < p || j0 + 1 > last {
                continue;
            }
            let t = pos - j0 as f64;
            let eta = 1e-3;
            let right = (k(c * eta.exp()) - k(c)) / (c * eta);
            let left = (k(c) - k(c * (-eta).exp())) / (c * eta);
            let e = 0.5 * (right - left) * da * da * (t * (1.0 - t) - 1.0 / 6.0);
            for (j, part) in [(j0, 1.0 - t), (j0 + 1, t)] {
                if j <= m {
                    node_weights[j] -= e * part;
                } else {
                    far[j - m - 1] -= e * part / da;
                }
            }
        }
        if let Some(d) = far.last_mut() {
            *d *= 0.5;
        }
        let a_last = aq.alpha(last);
        let mut br = alloc::vec![0.0, 1.0 / a_last];
        br.extend(weight.r_grid.iter().copied().filter(|&r| r > 0.0 && r < 1.0 / a_last));
        br.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let remainder = integrate_pieces(|r| weight.kappa(r) - k0, &br, cfg)?;
        // Oscillatory part of the remainder by two integration-by-parts terms.
        let g = |a: f64| (k(a) - k0) / (a * a);
        let (g_a, dg_a) = (g(a_last), (g(a_last * 1.001) - g(a_last * 0.999)) / (0.002 * a_last));
        let extra: Vec<(f64, f64)> =
            far.iter().enumerate().map(|(i, &d)| ((m + 1 + i) as f64, d)).filter(|t| t.1 != 0.0).collect();
        let q = aq.quad_tail_symbol();
        let tail = (0..grid.len())
            .map(|i| {
                let theta = grid.xi(i) * da;
                let corr: f64 = extra.iter().map(|&(j, d)| d * (1.0 - (j * theta).cos()) / (j * j)).sum();
                let xi = grid.xi(i).abs();
                let rem = if xi == 0.0 {
                    0.0
                } else {
                    remainder + g_a * (xi * a_last).sin() / xi + dg_a * (xi * a_last).cos() / (xi * xi)
                };
                (k0 * q[i] + corr) / da + rem
            })
            .collect();
        Ok(Self { aq: aq.clone(), node_weights, tail })
    }

    pub fn alpha_quadrature(&self) -> &AlphaQuadrature {
        &self.aq
    }
}

/// Kernel (second-difference) form of `|D|^{1,φ} g`.
pub fn weighted_fraclap_kernel(g: &SampledField, kw: &KernelWeight) -> SampledField {
    let aq = &kw.aq;
    let sh = aq.shifted(g);
    let gxx = derivative(g, 2);
    let mut acc: Vec<f64> = gxx.values().iter().map(|v| -kw.node_weights[0] * v).collect();
    for j in 1..=aq.nodes() {
        let a = aq.alpha(j);
        let c = kw.node_weights[j] / (a * a);
        for (((o, &b), p), m) in acc.iter_mut().zip(g.values()).zip(sh.plus(j).iter()).zip(sh.minus(j).iter()) {
            *o += c * (2.0 * b - p - m);
        }
    }
    let tail = g.spectrum().apply_table(&kw.tail).to_field();
    SampledField::from_raw(g.grid(), acc).scale(0.5).add(&tail)
}

/// Second-difference seminorm
/// `‖g‖²_{s,κ} = ∬ |2g(x) − g(x+α) − g(x−α)|²/|α|^{1+2s} κ(1/|α|)² dα dx`
/// for `s ∈ (1, 2)`, by the paired `α`-quadrature without far-field closure.
pub fn second_difference_seminorm(g: &SampledField, s: f64, weight: &AdmissibleWeight, aq: &AlphaQuadrature) -> f64 {
    let sh = aq.shifted(g);
    let mut total = 0.0;
    for j in 1..=aq.nodes() {
        let a = aq.alpha(j);
        let c = 2.0 * aq.weight(j) * weight.kappa(1.0 / a).powi(2) / a.powf(1.0 + 2.0 * s);
        let s2: f64 = g
            .values()
            .iter()
            .zip(sh.plus(j).iter())
            .zip(sh.minus(j).iter())
            .map(|((&b, p), m)| (2.0 * b - p - m).powi(2))
            .sum();
        total += c * s2;
    }
    (total * g.grid().spacing()).sqrt()
}

/// Closed form of `Σ_{j>M}(1 − cos jθ)/j²` re-exported for oracle tests.
pub fn quadratic_tail(theta: f64, m: usize) -> f64 {
    cosine_tail(theta, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_spectral::PeriodicGrid;
    use proptest::prelude::*;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(PI, n).unwrap()
    }

    fn band_limited(g: &PeriodicGrid, c: &[f64]) -> SampledField {
        g.sample(|x| c.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x + 0.3 * k as f64).cos()).sum())
    }

    fn max_diff(a: &SampledField, b: &SampledField) -> f64 {
        a.sub(b).max_abs()
    }

    #[test]
    fn fractional_laplacian_examples() {
        let g = grid(64);
        let f = g.sample(|x| (3.0 * x).cos());
        assert!(max_diff(&fractional_laplacian(&f, 1.0), &f.scale(3.0)) < 1e-12);
        assert_eq!(fractional_laplacian(&f, 0.0), f);
        let f = band_limited(&g, &[1.0, -0.5, 0.25, 0.1]);
        assert!(max_diff(&fractional_laplacian(&f, 2.0), &derivative(&f, 2).scale(-1.0)) < 1e-10);
    }

    #[test]
    fn hilbert_convention() {
        let g = grid(64);
        for k in 1..5 {
            let f = g.sample(|x| (k as f64 * x).cos());
            let s = g.sample(|x| (k as f64 * x).sin());
            assert!(max_diff(&hilbert_transform(&f), &s) < 1e-12);
        }
        let f = band_limited(&g, &[0.3, 1.0, -0.7, 0.2, 0.05]);
        assert!(max_diff(&derivative(&hilbert_transform(&f), 1), &fractional_laplacian(&f, 1.0)) < 1e-12);
    }

    #[test]
    fn hilbert_quadrature_oracle() {
        let g = grid(64);
        let f = g.sample(|x| x.cos());
        let s = g.sample(|x| x.sin());
        let aq = AlphaQuadrature::standard(&g);
        assert!(max_diff(&hilbert_quadrature(&f, &aq, true), &s) < 1e-12);
        // without the closure the truncated integral converges like 1/(extent·L)
        let aq = AlphaQuadrature::new(&g, 1, 1, 4096).unwrap();
        assert!(max_diff(&hilbert_quadrature(&f, &aq, false), &s) < 1e-4);
    }

    #[test]
    fn riesz_examples() {
        let g = grid(64);
        let f = g.sample(|x| (2.0 * x).cos());
        let s = 0.3;
        assert!(max_diff(&riesz_potential(&f, s).unwrap(), &f.scale(2f64.powf(-s))) < 1e-12);
        let f = band_limited(&g, &[1.0, 0.5, -0.2]);
        let back = fractional_laplacian(&riesz_potential(&f, s).unwrap(), s);
        assert!(max_diff(&back, &f) < 1e-12);
        assert!(riesz_potential(&f, 1.0).is_err());
    }

    #[test]
    fn differences() {
        let g = grid(64);
        let f = g.sample(|x| x.sin());
        let e1 = finite_differences(&f, 1e-2, DifferenceKind::E).unwrap().max_abs();
        let e2 = finite_differences(&f, 5e-3, DifferenceKind::E).unwrap().max_abs();
        assert!((e1 / e2 - 2.0).abs() < 1e-3);
        let a = 0.37;
        let sp = finite_differences(&f, a, DifferenceKind::S).unwrap();
        let sm = finite_differences(&f, -a, DifferenceKind::S).unwrap();
        assert!(max_diff(&sp, &sm.scale(-1.0)) < 1e-12);
        let d = finite_differences(&f, a, DifferenceKind::Delta).unwrap();
        assert!(max_diff(&d, &g.sample(|x| x.sin() - (x - a).sin())) < 1e-12);
        assert_eq!(finite_differences(&f, 0.0, DifferenceKind::Slope), Err(Error::ZeroOffset));
    }

    #[test]
    fn fourier_side_bound_for_e() {
        // |F(E_α f)| ≤ 2|ξ| min{1, |αξ|} |f̂| for every mode
        let g = grid(64);
        let f = band_limited(&g, &[1.0, 0.5, -0.2, 0.3, 0.1, 0.05]);
        let fh = f.spectrum();
        for &a in &[0.01, 0.3, 1.0, 2.5] {
            let e = finite_differences(&f, a, DifferenceKind::E).unwrap().spectrum();
            for i in 0..g.len() {
                let xi = g.xi(i).abs();
                assert!(e.coeffs()[i].norm() <= 2.0 * xi * (a * xi).min(1.0) * fh.coeffs()[i].norm() + 1e-10);
            }
        }
    }

    #[test]
    fn commutators_vanish_on_constants() {
        let g = grid(64);
        let c = g.sample(|_| 2.5);
        let f = band_limited(&g, &[1.0, 0.5, -0.2]);
        assert!(commutator_hilbert_fn(&c, &f).max_abs() < 1e-12);
        let w = GridWeight::new(&AdmissibleWeight::logarithmic().unwrap(), &g).unwrap();
        assert!(commutator_weighted_gamma(0.25, &w, &c, &f).unwrap().max_abs() < 1e-12);
        assert!(commutator_weighted_gamma(0.5, &w, &c, &f).is_err());
    }

    #[test]
    fn weighted_constant_kappa_is_half_pi_fraclap() {
        let g = grid(64);
        let f = band_limited(&g, &[1.0, 0.5, -0.2, 0.1]);
        let w = GridWeight::new(&AdmissibleWeight::constant(), &g).unwrap();
        let lhs = weighted_fraclap_spectral(&f, 1.5, &w);
        assert!(max_diff(&lhs, &fractional_laplacian(&f, 1.5).scale(PI / 2.0)) < 1e-12);
    }

    #[test]
    fn kernel_form_constant_kappa_cosine() {
        let g = grid(64);
        let f = g.sample(|x| x.cos());
        let kw = KernelWeight::new(&AdmissibleWeight::constant(), &AlphaQuadrature::standard(&g)).unwrap();
        let r = weighted_fraclap_kernel(&f, &kw);
        assert!(max_diff(&r, &f.scale(PI / 2.0)) < 1e-4);
        assert!(weighted_fraclap_kernel(&g.sample(|_| 3.0), &kw).max_abs() < 1e-12);
    }

    #[test]
    fn kernel_form_matches_spectral_for_log_weight() {
        let w = AdmissibleWeight::logarithmic().unwrap();
        let mut errs = Vec::new();
        for &n in &[128usize, 256, 512] {
            let g = PeriodicGrid::new(4.0 * PI, n).unwrap();
            let f = g.sample(|x| (-(x * x) / 2.0).exp() * (2.0 * x).cos());
            let kw = KernelWeight::new(&w, &AlphaQuadrature::standard(&g)).unwrap();
            let gw = GridWeight::new(&w, &g).unwrap();
            let a = weighted_fraclap_kernel(&f, &kw);
            let b = weighted_fraclap_spectral(&f, 1.0, &gw);
            errs.push(a.sub(&b).l2_norm() / b.l2_norm());
        }
        assert!(errs[2] < 1e-3, "{errs:?}");
        assert!(errs[2] < errs[0], "{errs:?}");
    }

    proptest! {
        #[test]
        fn kernel_form_is_linear(c in proptest::collection::vec(-1.0f64..1.0, 4), t in -3.0f64..3.0) {
            let g = grid(32);
            let kw = KernelWeight::new(&AdmissibleWeight::constant(), &AlphaQuadrature::standard(&g)).unwrap();
            let f1 = band_limited(&g, &c);
            let f2 = g.sample(|x| (2.0 * x).sin());
            let lhs = weighted_fraclap_kernel(&f1.add(&f2.scale(t)), &kw);
            let rhs = weighted_fraclap_kernel(&f1, &kw).add(&weighted_fraclap_kernel(&f2, &kw).scale(t));
            prop_assert!(max_diff(&lhs, &rhs) < 1e-10);
        }

        #[test]
        fn commutator_bilinear(c in proptest::collection::vec(-1.0f64..1.0, 3), t in -2.0f64..2.0) {
            let g = grid(64);
            let a = band_limited(&g, &c);
            let b = g.sample(|x| (3.0 * x).sin());
            let d = g.sample(|x| x.cos());
            let lhs = commutator_hilbert_fn(&a, &b.add(&d.scale(t)));
            let rhs = commutator_hilbert_fn(&a, &b).add(&commutator_hilbert_fn(&a, &d).scale(t));
            prop_assert!(max_diff(&lhs, &rhs) < 1e-10);
        }
    }
}
