//! Globally adaptive Gauss–Kronrod (7/15) integration.

use alloc::vec::Vec;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = r * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * r, ((k - g) * r).abs())
}

/// Tolerances and budget for [`integrate`].
#[derive(Clone, Copy, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-10, max_panels: 4000 }
    }
}

/// Integrates `f` over `[a, b]` by bisecting the panel with the largest error.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    loop {
        if !total.is_finite() {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= cfg.max_panels {
            return Err(Error::QuadratureNonconvergence { tol: cfg.rel_tol, estimate: err });
        }
        let (iw, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, p)| if p.3 > be { (i, p.3) } else { (bi, be) });
        let (pa, pb, pv, pe) = panels.swap_remove(iw);
        let m = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&mut f, pa, m);
        let (v2, e2) = gk15(&mut f, m, pb);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        panels.push((pa, m, v1, e1));
        panels.push((m, pb, v2, e2));
        if err < 0.0 {
            err = panels.iter().map(|p| p.3).sum();
        }
    }
}

/// Sum of [`integrate`] over consecutive breakpoints.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], cfg: QuadConfig) -> Result<f64> {
    let mut s = 0.0;
    for w in breaks.windows(2) {
        s += integrate(&mut f, w[0], w[1], cfg)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomials_and_smooth() {
        let c = QuadConfig::default();
        assert!((integrate(|x| x * x, 0.0, 3.0, c).unwrap() - 9.0).abs() < 1e-13);
        assert!((integrate(|x| x.sin(), 0.0, PI, c).unwrap() - 2.0).abs() < 1e-13);
        assert!((integrate(|x| (-x * x).exp(), -10.0, 10.0, c).unwrap() - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let c = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-11, max_panels: 4000 };
        let v = integrate(|x| -x.ln(), 0.0, 1.0, c).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, c).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let c = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-15, max_panels: 3 };
        assert!(integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, c).is_err());
    }
}
