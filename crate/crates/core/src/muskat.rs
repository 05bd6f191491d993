//! The Muskat right-hand side in three equivalent forms.
//!
//! * principal-value form `(1/π) pv∫ ∂_xΔ_α f / (1 + (Δ_α f)²) dα`,
//! * the split `−|D|f + T(f)f` with
//!   `T(f)g = −(1/π)∫ Δ_α g_x · F_α dα`, `F_α = (Δ_α f)²/(1+(Δ_α f)²)`,
//! * the paralinearization `T(f)g = B(f_x)|D|g − W(f)g_x + R(f)g`.
//!
//! All `α`-integrals use the paired nodes of [`AlphaQuadrature`]; `∂_xΔ_α g`
//! is evaluated as `Δ_α(∂_x g)` with a spectral derivative.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::alpha::{AlphaQuadrature, Rotated};
use crate::diagnostics::sobolev_norm;
use crate::error::{Error, Result};
use crate::grid_spectral::SampledField;
use crate::operators::{derivative, fractional_laplacian, shift};

/// The saturation `B(u) = u²/(1+u²)` and the bracket `⟨a⟩ = √(1+a²)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Saturation;

impl Saturation {
    pub fn b(u: f64) -> f64 {
        let u2 = u * u;
        u2 / (1.0 + u2)
    }

    pub fn bracket(a: f64) -> f64 {
        (1.0 + a * a).sqrt()
    }

    /// Right side of `|B(u) − B(v)| ≤ (|u−v| + |u−v|²)/⟨u⟩²`.
    pub fn lipschitz_bound(u: f64, v: f64) -> f64 {
        let d = (u - v).abs();
        (d + d * d) / (1.0 + u * u)
    }
}

/// All forms of the right-hand side at one state.
#[derive(Clone, Debug)]
pub struct RhsBundle {
    pub pv_form: SampledField,
    pub t_of_f: SampledField,
    pub w_coeff: SampledField,
    pub r_term: SampledField,
    /// `‖T(f)f − [B(f_x)|D|f − W(f)f_x + R(f)f]‖_{L²}`.
    pub decomposition_residual: f64,
    /// `‖pv_form − (−|D|f + T(f)f)‖_{L²}`.
    pub split_residual: f64,
}

/// Data at the node pair `±α_j` seen by one grid point.
#[derive(Clone, Copy)]
struct Pair {
    /// `Δ_α f`
    sm: f64,
    /// `Δ_{−α} f`
    sp: f64,
    gx: f64,
    gxm: f64,
    gxp: f64,
    a: f64,
}

/// `Σ_{j≥1} w_j · kernel(pair)` added to `init`, pointwise in `x`.
fn paired_sum<K: Fn(Pair) -> f64>(
    aq: &AlphaQuadrature,
    f: &SampledField,
    gx: &SampledField,
    mut acc: Vec<f64>,
    kernel: K,
) -> Vec<f64> {
    let sf = aq.shifted(f);
    let sg = aq.shifted(gx);
    for j in 1..=aq.nodes() {
        let a = aq.alpha(j);
        let w = aq.weight(j);
        let inv = 1.0 / a;
        let (fp, fm): (Rotated, Rotated) = (sf.plus(j), sf.minus(j));
        let (gp, gm) = (sg.plus(j), sg.minus(j));
        let it = f.values().iter().zip(gx.values()).zip(fp.iter().zip(fm.iter())).zip(gp.iter().zip(gm.iter()));
        for (o, (((&fi, &gi), (&fpi, &fmi)), (&gpi, &gmi))) in acc.iter_mut().zip(it) {
            let p = Pair { sm: (fi - fmi) * inv, sp: (fpi - fi) * inv, gx: gi, gxm: gmi, gxp: gpi, a };
            *o += w * kernel(p);
        }
    }
    acc
}

fn sat(s: f64) -> f64 {
    let s2 = s * s;
    s2 / (1.0 + s2)
}

/// Evaluator of the nonlinear operators on one grid.
#[derive(Clone, Debug)]
pub struct Muskat {
    aq: AlphaQuadrature,
    keep_fraction: f64,
}

impl Muskat {
    /// Standard `α`-layout, no dealiasing.
    pub fn new(grid: &crate::PeriodicGrid) -> Self {
        Self { aq: AlphaQuadrature::standard(grid), keep_fraction: 1.0 }
    }

    pub fn with_quadrature(aq: AlphaQuadrature) -> Self {
        Self { aq, keep_fraction: 1.0 }
    }

    /// Zero modes `|k| > fraction·N/2` of [`Muskat::rhs_pv`]'s output.
    pub fn with_dealias(mut self, keep_fraction: f64) -> Result<Self> {
        if !(keep_fraction > 0.0 && keep_fraction <= 1.0) {
            return Err(Error::InvalidParameter("dealias fraction must lie in (0, 1]".into()));
        }
        self.keep_fraction = keep_fraction;
        Ok(self)
    }

    pub fn quadrature(&self) -> &AlphaQuadrature {
        &self.aq
    }

    pub fn keep_fraction(&self) -> f64 {
        self.keep_fraction
    }

    fn dealias(&self, u: SampledField) -> SampledField {
        if self.keep_fraction >= 1.0 {
            u
        } else {
            u.spectrum().dealias(self.keep_fraction).to_field()
        }
    }

    /// `(1/π) pv∫ ∂_xΔ_α f/(1+(Δ_α f)²) dα`, dealiased.
    pub fn rhs_pv(&self, f: &SampledField) -> SampledField {
        let fx = derivative(f, 1);
        let fxx = derivative(f, 2);
        let w0 = 2.0 * self.aq.weight(0);
        let init = fx.values().iter().zip(fxx.values()).map(|(&u, &v)| w0 * v / (1.0 + u * u)).collect();
        let acc = paired_sum(&self.aq, f, &fx, init, |p| {
            (p.gx - p.gxm) / p.a / (1.0 + p.sm * p.sm) + (p.gxp - p.gx) / p.a / (1.0 + p.sp * p.sp)
        });
        let out = SampledField::from_raw(f.grid(), acc).scale(1.0 / PI).add(&self.aq.pv_tail(&fx));
        self.dealias(out)
    }

    /// `T(f)g = −(1/π)∫ Δ_α g_x · F_α dα`.
    pub fn apply_t(&self, f: &SampledField, g: &SampledField) -> SampledField {
        let fx = derivative(f, 1);
        let gx = derivative(g, 1);
        let gxx = derivative(g, 2);
        let w0 = 2.0 * self.aq.weight(0);
        let init = fx.values().iter().zip(gxx.values()).map(|(&u, &v)| w0 * v * sat(u)).collect();
        let acc = paired_sum(&self.aq, f, &gx, init, |p| {
            (p.gx - p.gxm) / p.a * sat(p.sm) + (p.gxp - p.gx) / p.a * sat(p.sp)
        });
        SampledField::from_raw(f.grid(), acc).scale(-1.0 / PI)
    }

    /// `W(f) = (1/π)∫ O(α,·)/α dα`.
    pub fn compute_w(&self, f: &SampledField) -> SampledField {
        let fx = derivative(f, 1);
        let fxx = derivative(f, 2);
        let w0 = 2.0 * self.aq.weight(0);
        let init = fx.values().iter().zip(fxx.values()).map(|(&u, &v)| w0 * odd_limit(u, v)).collect();
        let acc = paired_sum(&self.aq, f, &fx, init, |p| (sat(p.sm) - sat(p.sp)) / p.a);
        SampledField::from_raw(f.grid(), acc).scale(1.0 / PI)
    }

    /// `R(f)g = −(1/π)∫ Δ_α g_x (E − B(f_x)) dα + (1/π)∫ g_x(·−α) O/α dα`.
    pub fn apply_r(&self, f: &SampledField, g: &SampledField) -> SampledField {
        let fx = derivative(f, 1);
        let fxx = derivative(f, 2);
        let gx = derivative(g, 1);
        let w0 = 2.0 * self.aq.weight(0);
        let bf: Vec<f64> = fx.values().iter().map(|&u| sat(u)).collect();
        let init = fx.values().iter().zip(fxx.values()).zip(gx.values()).map(|((&u, &v), &d)| w0 * odd_limit(u, v) * d).collect();
        let sf = self.aq.shifted(f);
        let sg = self.aq.shifted(&gx);
        let mut acc: Vec<f64> = init;
        for j in 1..=self.aq.nodes() {
            let a = self.aq.alpha(j);
            let w = self.aq.weight(j);
            let (fp, fm, gp, gm) = (sf.plus(j), sf.minus(j), sg.plus(j), sg.minus(j));
            let it = f.values().iter().zip(&bf).zip(fp.iter().zip(fm.iter())).zip(gp.iter().zip(gm.iter()));
            for (o, (((&fi, &b), (&fpi, &fmi)), (&gpi, &gmi))) in acc.iter_mut().zip(it) {
                let fa = sat((fi - fmi) / a);
                let fb = sat((fpi - fi) / a);
                let e = 0.5 * (fa + fb);
                let od = 0.5 * (fa - fb);
                *o += w * (-(e - b) * (gpi - gmi) / a + od / a * (gmi + gpi));
            }
        }
        let mut out = SampledField::from_raw(f.grid(), acc).scale(1.0 / PI);
        let tail = self.aq.pv_tail(&gx);
        let bfield = SampledField::from_raw(f.grid(), bf);
        out = out.add(&bfield.mul(&tail));
        out
    }

    /// All forms together with the two identity residuals.
    pub fn bundle(&self, f: &SampledField) -> RhsBundle {
        let pv_form = self.rhs_pv(f);
        let t_of_f = self.apply_t(f, f);
        let w_coeff = self.compute_w(f);
        let r_term = self.apply_r(f, f);
        let d = fractional_laplacian(f, 1.0);
        let fx = derivative(f, 1);
        let split = d.scale(-1.0).add(&t_of_f);
        let split_residual = pv_form.sub(&self.dealias(split)).l2_norm();
        let dec = fx.map(Saturation::b).mul(&d).sub(&w_coeff.mul(&fx)).add(&r_term);
        let decomposition_residual = t_of_f.sub(&dec).l2_norm();
        RhsBundle { pv_form, t_of_f, w_coeff, r_term, decomposition_residual, split_residual }
    }

    /// `‖(T(f1) − T(f2))g‖_{L²}` and its ratios against
    /// `‖f1−f2‖_{Ḣ^{1−δ}}‖g‖_{Ḣ^{3/2+δ}}` for `δ = 0` and `δ = 1/4`.
    pub fn lipschitz_t_difference(&self, f1: &SampledField, f2: &SampledField, g: &SampledField) -> LipschitzRatios {
        let diff = self.apply_t(f1, g).sub(&self.apply_t(f2, g)).l2_norm();
        let df = f1.sub(f2);
        let ratio = |delta: f64| {
            let den = sobolev_norm(&df, 1.0 - delta, true) * sobolev_norm(g, 1.5 + delta, true);
            if den == 0.0 {
                0.0
            } else {
                diff / den
            }
        };
        LipschitzRatios { difference: diff, ratio_delta0: ratio(0.0), ratio_delta_quarter: ratio(0.25) }
    }
}

/// Output of [`Muskat::lipschitz_t_difference`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzRatios {
    pub difference: f64,
    pub ratio_delta0: f64,
    pub ratio_delta_quarter: f64,
}

/// `lim_{α→0} O(α,·)/α = −f_x f_xx/(1+f_x²)²`.
fn odd_limit(fx: f64, fxx: f64) -> f64 {
    let d = 1.0 + fx * fx;
    -fx * fxx / (d * d)
}

/// Odd and even parts in `α` of `F_α`, at a single offset.
pub fn odd_even_parts(f: &SampledField, alpha: f64) -> Result<(SampledField, SampledField)> {
    if alpha == 0.0 {
        return Err(Error::ZeroOffset);
    }
    let fm = shift(f, alpha);
    let fp = shift(f, -alpha);
    let a = f.zip_with(&fm, |x, y| sat((x - y) / alpha));
    let b = f.zip_with(&fp, |x, y| sat((x - y) / -alpha));
    Ok((a.zip_with(&b, |p, q| 0.5 * (p - q)), a.zip_with(&b, |p, q| 0.5 * (p + q))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_spectral::PeriodicGrid;
    use proptest::prelude::*;

    fn smooth(g: &PeriodicGrid, amp: f64) -> SampledField {
        g.sample(|x| amp * ((x).cos() + 0.5 * (2.0 * x + 0.3).sin() - 0.25 * (3.0 * x + 1.0).cos()))
    }

    #[test]
    fn zero_data() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let m = Muskat::new(&g);
        let z = g.zeros();
        let u = smooth(&g, 1.0);
        assert_eq!(m.rhs_pv(&z).max_abs(), 0.0);
        assert_eq!(m.apply_t(&z, &u).max_abs(), 0.0);
        assert_eq!(m.compute_w(&z).max_abs(), 0.0);
        assert_eq!(m.apply_r(&z, &u).max_abs(), 0.0);
        assert!(m.apply_r(&u, &g.sample(|_| 3.0)).max_abs() < 1e-14);
    }

    #[test]
    fn cubic_residual() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let m = Muskat::new(&g);
        let ratio = |a: f64| {
            let f = g.sample(|x| a * x.cos());
            m.rhs_pv(&f).add(&fractional_laplacian(&f, 1.0)).l2_norm() / a.powi(3)
        };
        let (r1, r2) = (ratio(1e-3), ratio(2e-3));
        assert!(r1.is_finite() && r1 > 0.0);
        assert!((r1 / r2 - 1.0).abs() < 0.05, "{r1} {r2}");
    }

    #[test]
    fn identities_at_round_off() {
        let g = PeriodicGrid::new(PI, 128).unwrap();
        let m = Muskat::new(&g);
        for amp in [0.1, 1.0, 3.0] {
            let b = m.bundle(&smooth(&g, amp));
            assert!(b.split_residual < 1e-10 * (1.0 + b.pv_form.l2_norm()), "{}", b.split_residual);
            assert!(b.decomposition_residual < 1e-10 * (1.0 + b.t_of_f.l2_norm()), "{}", b.decomposition_residual);
        }
    }

    #[test]
    fn translation_and_reflection() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let m = Muskat::new(&g);
        let f = smooth(&g, 1.5);
        let r = m.rhs_pv(&f);
        let n = g.len();
        let s = 5;
        let fs = SampledField::from_raw(&g, (0..n).map(|i| f.values()[(i + s) % n]).collect());
        let rs = m.rhs_pv(&fs);
        for i in 0..n {
            assert!((rs.values()[i] - r.values()[(i + s) % n]).abs() < 1e-10);
        }
        let refl = |u: &SampledField| SampledField::from_raw(&g, (0..n).map(|i| -u.values()[(n - i) % n]).collect());
        let rr = m.rhs_pv(&refl(&f));
        assert!(rr.sub(&refl(&r)).max_abs() < 1e-10);
        let odd = g.sample(|x| x.sin() + 0.4 * (3.0 * x).sin());
        let ro = m.rhs_pv(&odd);
        assert!(ro.sub(&refl(&ro)).max_abs() < 1e-10);
    }

    #[test]
    fn scaling_covariance() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let f = smooth(&g, 1.2);
        let r = Muskat::new(&g).rhs_pv(&f);
        for lam in [0.5, 2.0, 4.0] {
            let gl = PeriodicGrid::new(PI / lam, 64).unwrap();
            let fl = SampledField::from_raw(&gl, f.values().iter().map(|v| v / lam).collect());
            let rl = Muskat::new(&gl).rhs_pv(&fl);
            let err = rl.values().iter().zip(r.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-8, "λ={lam}: {err}");
        }
    }

    #[test]
    fn w_vanishes_at_symmetry_point() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let m = Muskat::new(&g);
        let f = g.sample(|x| x.cos() + 0.3 * (2.0 * x).cos());
        let w = m.compute_w(&f);
        assert!(w.values()[g.len() / 2].abs() < 1e-13);
        assert!(w.is_finite());
    }

    #[test]
    fn w_converges_with_alpha_range() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let f = smooth(&g, 1.0);
        let w = |ext| Muskat::with_quadrature(AlphaQuadrature::new(&g, 1, 1, ext).unwrap()).compute_w(&f);
        let (w1, w2, w4) = (w(1), w(2), w(4));
        let (d1, d2) = (w2.sub(&w1).l2_norm(), w4.sub(&w2).l2_norm());
        assert!(d2 < d1, "{d1} {d2}");
    }

    #[test]
    fn odd_even_symmetry_and_limit() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let f = smooth(&g, 2.0);
        for a in [0.1, 0.7, 2.0] {
            let (o, e) = odd_even_parts(&f, a).unwrap();
            let (om, em) = odd_even_parts(&f, -a).unwrap();
            assert!(o.add(&om).max_abs() < 1e-14);
            assert!(e.sub(&em).max_abs() < 1e-14);
            assert!(o.max_abs() <= 0.5);
        }
        let b = derivative(&f, 1).map(Saturation::b);
        let err = |a| odd_even_parts(&f, a).unwrap().1.sub(&b).max_abs();
        assert!(err(0.01) < 0.55 * err(0.02));
        assert!(odd_even_parts(&f, 0.0).is_err());
    }

    #[test]
    fn lipschitz_ratios() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let m = Muskat::new(&g);
        let f1 = smooth(&g, 1.0);
        let u = g.sample(|x| 0.2 * (2.0 * x).sin());
        assert_eq!(m.lipschitz_t_difference(&f1, &f1, &u).difference, 0.0);
        let r = m.lipschitz_t_difference(&f1, &f1.add(&u), &smooth(&g, 0.5));
        assert!(r.ratio_delta0.is_finite() && r.ratio_delta_quarter.is_finite() && r.difference > 0.0);
    }

    proptest! {
        #[test]
        fn saturation_bounds(u in -1e3f64..1e3, v in -1e3f64..1e3) {
            let b = Saturation::b(u);
            prop_assert!((0.0..1.0).contains(&b));
            prop_assert!((b - Saturation::b(v)).abs() <= Saturation::lipschitz_bound(u, v) * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn f_alpha_in_unit_interval(c in prop::collection::vec(-3.0f64..3.0, 4), a in 0.01f64..3.0) {
            let g = PeriodicGrid::new(PI, 32).unwrap();
            let f = g.sample(|x| c[0] * x.cos() + c[1] * x.sin() + c[2] * (2.0 * x).cos() + c[3] * (3.0 * x).sin());
            let (o, e) = odd_even_parts(&f, a).unwrap();
            for (p, q) in o.values().iter().zip(e.values()) {
                prop_assert!(p + q >= 0.0 && p + q < 1.0);
            }
        }
    }
}
