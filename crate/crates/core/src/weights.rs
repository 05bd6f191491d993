//! Admissible weights `κ` and the induced symbol
//! `φ(λ) = ∫₀^∞ (1 − cos h)/h² κ(λ/h) dh`.
//!
//! A weight is stored as a table on `r = 0` followed by log-spaced nodes up to
//! `r_max`; between nodes `κ` is linear in `log r`. Beyond `r_max` it is
//! continued by `κ(r_max)·log(4 + r)/log(4 + r_max)` when the last table
//! segment already grows at that rate, and by the constant `κ(r_max)` otherwise.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid_spectral::{PeriodicGrid, Spectrum};
use crate::quadrature::{integrate_pieces, QuadConfig};

const R_MIN: f64 = 1e-4;
const NODES_PER_DECADE: usize = 40;
/// Default upper end of the table.
pub const DEFAULT_R_MAX: f64 = 1e5;
/// Number of half-periods integrated before the asymptotic tail of `φ`.
const OSC_HALF_PERIODS: usize = 100;

/// Tabulated weight `κ` with `φ` on the same nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleWeight {
    pub r_grid: Vec<f64>,
    pub kappa: Vec<f64>,
    pub phi: Vec<f64>,
    pub doubling_c0: f64,
    pub r0: f64,
}

/// Outcome of [`check_admissible`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub kappa0_at_least_one: bool,
    pub h1_increasing: bool,
    pub h2_doubling: bool,
    pub h3_log_capped: bool,
    pub doubling_c0: f64,
    pub r0: f64,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.kappa0_at_least_one && self.h1_increasing && self.h2_doubling && self.h3_log_capped
    }
}

/// Nodes `0, R_MIN, ..., r_max` with a fixed number of nodes per decade.
pub fn log_grid(r_max: f64) -> Vec<f64> {
    let decades = (r_max / R_MIN).log10();
    let m = ((decades * NODES_PER_DECADE as f64).ceil() as usize).max(1);
    let mut g = Vec::with_capacity(m + 2);
    g.push(0.0);
    for i in 0..=m {
        g.push(R_MIN * (r_max / R_MIN).powf(i as f64 / m as f64));
    }
    g
}

fn interp_kappa(r_grid: &[f64], kappa: &[f64], r: f64) -> f64 {
    let last = r_grid.len() - 1;
    if r <= 0.0 {
        return kappa[0];
    }
    if r >= r_grid[last] {
        let q_last = kappa[last] / (4.0 + r_grid[last]).ln();
        let q_prev = kappa[last - 1] / (4.0 + r_grid[last - 1]).ln();
        if (q_last - q_prev).abs() <= 1e-12 * q_last {
            return kappa[last] * (4.0 + r).ln() / (4.0 + r_grid[last]).ln();
        }
        return kappa[last];
    }
    if r < r_grid[1] {
        return kappa[0] + (kappa[1] - kappa[0]) * r / r_grid[1];
    }
    let i = r_grid.partition_point(|&x| x <= r) - 1;
    let t = (r / r_grid[i]).ln() / (r_grid[i + 1] / r_grid[i]).ln();
    kappa[i] + t * (kappa[i + 1] - kappa[i])
}

/// `φ(λ)` by quadrature for an arbitrary `κ`.
///
/// On `(0, 1]` the substitution `h = e^{-u}` removes the endpoint; on
/// `[1, ∞)` the non-oscillatory part becomes `∫₀¹ κ(λt) dt`, the cosine part
/// is integrated over half-periods and closed by two terms of its
/// integration-by-parts expansion.
pub fn phi_quadrature<K: Fn(f64) -> f64>(kappa: K, lambda: f64) -> Result<f64> {
    phi_quadrature_with_kinks(kappa, lambda, &[])
}

/// [`phi_quadrature`] with the integration split wherever `λ/h` crosses one
/// of `kinks` (the nodes of a piecewise-defined `κ`).
pub fn phi_quadrature_with_kinks<K: Fn(f64) -> f64>(kappa: K, lambda: f64, kinks: &[f64]) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(FRAC_PI_2 * kappa(0.0));
    }
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-11, max_panels: 2000 };
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    };
    let u_max = 40.0;
    let mut br = alloc::vec![0.0, u_max];
    br.extend(kinks.iter().filter(|&&r| r > lambda).map(|&r| (r / lambda).ln()).filter(|&u| u < u_max));
    let near = integrate_pieces(
        |u| {
            let h = (-u).exp();
            let s = (0.5 * h).sin();
            2.0 * s * s / h * kappa(lambda / h)
        },
        &sorted(br),
        cfg,
    )?;
    let mut br = alloc::vec![0.0, 1.0];
    br.extend(kinks.iter().map(|&r| r / lambda).filter(|&t| t > 0.0 && t < 1.0));
    let flat = integrate_pieces(|t| kappa(lambda * t), &sorted(br), cfg)?;
    let a = |h: f64| kappa(lambda / h) / (h * h);
    let x = (OSC_HALF_PERIODS as f64 + 0.5) * PI;
    let mut br = Vec::with_capacity(OSC_HALF_PERIODS + 2);
    br.push(1.0);
    for j in 0..=OSC_HALF_PERIODS {
        br.push((j as f64 + 0.5) * PI);
    }
    br.extend(kinks.iter().filter(|&&r| r > 0.0).map(|&r| lambda / r).filter(|&h| h > 1.0 && h < x));
    let osc = integrate_pieces(|h| h.cos() * a(h), &sorted(br), cfg)?;
    let sin_x = if OSC_HALF_PERIODS.is_multiple_of(2) { 1.0 } else { -1.0 };
    let d = 0.5;
    let a2 = (a(x + d) - 2.0 * a(x) + a(x - d)) / (d * d);
    let tail = -sin_x * (a(x) - a2);
    Ok(near + flat - osc - tail)
}

impl AdmissibleWeight {
    /// Builds a weight from table values; `φ`, `c₀` and `r₀` are computed.
    pub fn from_table(r_grid: Vec<f64>, kappa: Vec<f64>) -> Result<Self> {
        assert!(r_grid.len() == kappa.len() && r_grid.len() >= 3 && r_grid[0] == 0.0);
        let phi = r_grid
            .iter()
            .map(|&l| phi_quadrature_with_kinks(|r| interp_kappa(&r_grid, &kappa, r), l, &r_grid))
            .collect::<Result<Vec<_>>>()?;
        let mut w = Self { r_grid, kappa, phi, doubling_c0: 0.0, r0: 0.0 };
        w.doubling_c0 = w.scan_doubling();
        w.r0 = w.scan_r0();
        Ok(w)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(kappa: F, r_max: f64) -> Result<Self> {
        let r_grid = log_grid(r_max);
        let k = r_grid.iter().map(|&r| kappa(r)).collect();
        Self::from_table(r_grid, k)
    }

    /// `κ ≡ 1`.
    pub fn constant() -> Self {
        let r_grid = log_grid(DEFAULT_R_MAX);
        let n = r_grid.len();
        let mut w = Self {
            r_grid,
            kappa: alloc::vec![1.0; n],
            phi: alloc::vec![FRAC_PI_2; n],
            doubling_c0: 1.0,
            r0: 0.0,
        };
        w.r0 = w.scan_r0();
        w
    }

    /// `κ(r) = log(4 + r)`.
    pub fn logarithmic() -> Result<Self> {
        Self::from_fn(|r| (4.0 + r).ln(), DEFAULT_R_MAX)
    }

    pub fn r_max(&self) -> f64 {
        *self.r_grid.last().unwrap()
    }

    pub fn kappa(&self, r: f64) -> f64 {
        interp_kappa(&self.r_grid, &self.kappa, r)
    }

    /// Tabulated `φ(λ)`, linear in `log λ` between nodes.
    pub fn phi_table(&self, lambda: f64) -> f64 {
        let last = self.r_grid.len() - 1;
        if lambda >= self.r_grid[last] {
            let ratio = self.kappa(lambda) / self.kappa[last];
            return self.phi[last] * ratio;
        }
        interp_kappa(&self.r_grid, &self.phi, lambda)
    }

    fn scan_doubling(&self) -> f64 {
        self.r_grid.iter().map(|&r| self.kappa(2.0 * r) / self.kappa(r)).fold(0.0, f64::max)
    }

    /// Smallest node from which `κ/log(4 + r)` is non-increasing to `r_max`.
    fn scan_r0(&self) -> f64 {
        let q: Vec<f64> =
            self.r_grid.iter().zip(&self.kappa).map(|(&r, &k)| k / (4.0 + r).ln()).collect();
        let mut i = q.len() - 1;
        while i > 0 && q[i] <= q[i - 1] * (1.0 + 1e-12) {
            i -= 1;
        }
        self.r_grid[i]
    }
}

/// Direct quadrature of `φ(λ)` for the tabulated `κ` (relative tolerance 1e−8 or better).
pub fn eval_phi(w: &AdmissibleWeight, lambda: f64) -> Result<f64> {
    phi_quadrature_with_kinks(|r| w.kappa(r), lambda, &w.r_grid)
}

/// Checks monotonicity, doubling and the logarithmic cap on the table.
///
/// The cap is read as "`κ/log(4 + r)` non-increasing on `[r₀, ∞)`": beyond `r_max` the
/// continuation makes the ratio constant, so the test requires the
/// non-increasing stretch to cover at least the last decade of the table.
pub fn check_admissible(w: &AdmissibleWeight) -> AdmissibilityReport {
    let h1 = w.kappa.windows(2).all(|p| p[1] >= p[0] * (1.0 - 1e-12));
    let c0 = w.scan_doubling();
    let r0 = w.scan_r0();
    AdmissibilityReport {
        kappa0_at_least_one: w.kappa[0] >= 1.0,
        h1_increasing: h1,
        h2_doubling: c0.is_finite() && c0 > 0.0,
        h3_log_capped: r0 <= w.r_max() / 10.0,
        doubling_c0: c0,
        r0,
    }
}

/// Data-adapted weight.
///
/// With `T(r) = Σ_{|ξ_k| ≥ r} |ξ_k|³ |f̂_k|²`, node values are
/// `max(1, min((T(1)/T(r'))^{1/4}, log(4 + r)/log 4))` followed by a running
/// maximum, where `r'` is the previous node. Using the tail at the previous
/// node keeps `κ(ξ)² ≤ (T(1)/T(ξ))^{1/2}` at every grid frequency after
/// interpolation, hence `Σ_{|ξ|≥1} |ξ|³ κ² |f̂|² ≤ 2 T(1)`.
pub fn weight_from_data(spec: &Spectrum) -> Result<AdmissibleWeight> {
    let grid = spec.grid();
    let mut modes: Vec<(f64, f64)> = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let xi = grid.xi(i).abs();
            (xi, xi * xi * xi * c.norm_sqr())
        })
        .collect();
    if modes.iter().all(|m| m.1 == 0.0) {
        return Ok(AdmissibleWeight::constant());
    }
    modes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut suffix = alloc::vec![0.0; modes.len() + 1];
    for i in (0..modes.len()).rev() {
        suffix[i] = suffix[i + 1] + modes[i].1;
    }
    let tail = |r: f64| suffix[modes.partition_point(|m| m.0 < r)];
    let t1 = tail(1.0);
    let xi_max = modes.last().unwrap().0;
    let r_grid = log_grid(DEFAULT_R_MAX.max(4.0 * xi_max));
    let log4 = 4.0f64.ln();
    let mut kappa = Vec::with_capacity(r_grid.len());
    let mut env = 1.0f64;
    for (i, &r) in r_grid.iter().enumerate() {
        let lag = if i == 0 { 0.0 } else { r_grid[i - 1] };
        let t = tail(lag);
        let a = if t == 0.0 { f64::INFINITY } else { (t1 / t).powf(0.25) };
        let cap = (4.0 + r).ln() / log4;
        env = env.max(a.min(cap).max(1.0));
        kappa.push(env);
    }
    AdmissibleWeight::from_table(r_grid, kappa)
}

/// Empirical `(min, max)` of `φ/κ` over table nodes in `[lo, hi]`.
pub fn equivalence_bounds(w: &AdmissibleWeight, lo: f64, hi: f64) -> (f64, f64) {
    w.r_grid
        .iter()
        .zip(w.kappa.iter().zip(&w.phi))
        .filter(|(&r, _)| r >= lo && r <= hi)
        .map(|(_, (&k, &p))| p / k)
        .fold((f64::INFINITY, 0.0f64), |(a, b), q| (a.min(q), b.max(q)))
}

/// Largest `min{λ|ξ|, 1}^β · κ(1/λ)/κ(|ξ|)` over the given samples.
pub fn kappa_ratio_constant(w: &AdmissibleWeight, beta: f64, lambdas: &[f64], xis: &[f64]) -> f64 {
    let mut c = 0.0f64;
    for &l in lambdas {
        let kl = w.kappa(1.0 / l);
        for &x in xis {
            let x = x.abs();
            if x == 0.0 {
                continue;
            }
            c = c.max((l * x).min(1.0).powf(beta) * kl / w.kappa(x));
        }
    }
    c
}

/// `φ(|ξ_k|)` at every storage index of one grid.
#[derive(Clone, Debug)]
pub struct GridWeight {
    grid: PeriodicGrid,
    weight: AdmissibleWeight,
    phi: Vec<f64>,
}

impl GridWeight {
    pub fn new(weight: &AdmissibleWeight, grid: &PeriodicGrid) -> Result<Self> {
        let n = grid.len();
        let constant = weight.kappa.iter().all(|&k| k == weight.kappa[0]);
        let per_mode = (0..=n / 2)
            .map(|m| {
                if constant {
                    Ok(FRAC_PI_2 * weight.kappa[0])
                } else {
                    eval_phi(weight, PI * m as f64 / grid.half_length())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = (0..n).map(|i| per_mode[grid.mode(i).unsigned_abs() as usize]).collect();
        Ok(Self { grid: grid.clone(), weight: weight.clone(), phi })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn weight(&self) -> &AdmissibleWeight {
        &self.weight
    }

    /// `φ(|ξ|)` in storage order.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Symbol `|ξ|^s φ(|ξ|)` in storage order.
    pub fn symbol(&self, s: f64) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| {
                let xi = self.grid.xi(i).abs();
                if xi == 0.0 {
                    if s == 0.0 {
                        self.phi[i]
                    } else {
                        0.0
                    }
                } else {
                    xi.powf(s) * self.phi[i]
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn constant_weight_phi_is_half_pi() {
        for &l in &[0.0, 1e-3, 0.5, 1.0, 7.0, 1e3] {
            let v = phi_quadrature(|_| 1.0, l).unwrap();
            assert!((v - FRAC_PI_2).abs() < 1e-9, "λ={l}: {v}");
        }
        let w = AdmissibleWeight::constant();
        assert!((eval_phi(&w, 3.0).unwrap() - FRAC_PI_2).abs() < 1e-9);
        let rep = check_admissible(&w);
        assert!(rep.all_pass());
        assert_eq!(rep.doubling_c0, 1.0);
        assert_eq!(equivalence_bounds(&w, 0.0, 1e4), (FRAC_PI_2, FRAC_PI_2));
    }

    #[test]
    fn phi_at_zero() {
        let w = AdmissibleWeight::logarithmic().unwrap();
        assert_eq!(eval_phi(&w, 0.0).unwrap(), FRAC_PI_2 * 4.0f64.ln());
    }

    /// Independent oracle: plain trapezoid on a very fine substituted grid.
    fn phi_oracle(kappa: impl Fn(f64) -> f64, l: f64) -> f64 {
        // ∫₀^∞ (1−cos h)/h² κ(l/h) dh with h = e^s, s ∈ [−40, 8], plus a
        // crude tail ∫_{e^8}^∞ κ(l/h)/h² ≈ κ(0+) e^{−8}.
        let n = 400_000;
        let (a, b) = (-40.0f64, 8.0f64);
        let ds = (b - a) / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let t = a + i as f64 * ds;
            let h = t.exp();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let v = 2.0 * (0.5 * h).sin().powi(2) / h * kappa(l / h);
            s += w * v * ds;
        }
        s + kappa(l / b.exp()) * (-b).exp()
    }

    #[test]
    fn log_weight_phi_matches_oracle() {
        for &l in &[0.1, 1.0, 10.0] {
            let q = phi_quadrature(|r| (4.0 + r).ln(), l).unwrap();
            let o = phi_oracle(|r| (4.0 + r).ln(), l);
            assert!((q - o).abs() < 2e-5 * o, "λ={l}: {q} vs {o}");
        }
    }

    #[test]
    fn log_weight_is_admissible_and_equivalent() {
        let w = AdmissibleWeight::logarithmic().unwrap();
        let rep = check_admissible(&w);
        assert!(rep.all_pass(), "{rep:?}");
        let (c, cc) = equivalence_bounds(&w, 1e-2, 1e4);
        assert!(c > 0.5 && cc < 2.0 && c <= cc, "{c} {cc}");
    }

    #[test]
    fn linear_weight_fails_h3() {
        let w = AdmissibleWeight::from_fn(|r| 1.0 + r, 1e3).unwrap();
        let rep = check_admissible(&w);
        assert!(!rep.h3_log_capped);
        assert!(rep.h1_increasing);
    }

    fn spectrum_from(grid: &PeriodicGrid, amp: impl Fn(f64) -> f64) -> Spectrum {
        let coeffs = (0..grid.len()).map(|i| Complex64::new(amp(grid.xi(i).abs()), 0.0)).collect();
        Spectrum::new(grid, coeffs).unwrap()
    }

    #[test]
    fn data_weight_degenerate_and_band_limited() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let w = weight_from_data(&Spectrum::zeros(&g)).unwrap();
        assert!(w.kappa.iter().all(|&k| k == 1.0));
        let s = spectrum_from(&g, |xi| if xi <= 2.0 && xi > 0.0 { 1.0 } else { 0.0 });
        let w = weight_from_data(&s).unwrap();
        for &r in &[3.0, 10.0, 100.0] {
            assert!((w.kappa(r) - (4.0 + r).ln() / 4.0f64.ln()).abs() < 1e-3 * w.kappa(r));
        }
        assert!(check_admissible(&w).all_pass());
    }

    #[test]
    fn data_weight_telescoping_bound() {
        let g = PeriodicGrid::new(PI, 1024).unwrap();
        let s = spectrum_from(&g, |xi| if xi == 0.0 { 0.0 } else { xi.powf(-2.2) });
        let w = weight_from_data(&s).unwrap();
        assert!(check_admissible(&w).all_pass());
        let mut low = 0.0;
        let mut t1 = 0.0;
        let mut lhs = 0.0;
        for (i, c) in s.coeffs().iter().enumerate() {
            let xi = g.xi(i).abs();
            let m = xi.powi(3) * c.norm_sqr();
            lhs += m * w.kappa(xi).powi(2);
            if xi < 1.0 {
                low += m;
            } else {
                t1 += m;
            }
        }
        assert!(lhs <= low + 2.0 * t1);
        assert!(w.kappa(g.xi(g.len() / 2 - 1)) > 1.0);
        let (c, _) = equivalence_bounds(&w, 1e-3, 1e4);
        assert!(c > 0.0);
    }

    #[test]
    fn kappa_ratio_constant_is_finite() {
        let w = AdmissibleWeight::logarithmic().unwrap();
        let lambdas: Vec<f64> = (0..=12).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect();
        let xis: Vec<f64> = (1..2000).map(|k| 0.1 * k as f64).collect();
        for &b in &[0.01, 0.5, 1.0] {
            let c = kappa_ratio_constant(&w, b, &lambdas, &xis);
            assert!(c.is_finite() && c < 10.0, "β={b}: {c}");
        }
    }

    #[test]
    fn json_shape() {
        let w = AdmissibleWeight::constant();
        let v: serde_json::Value = serde_json::to_value(&w).unwrap();
        for k in ["r_grid", "kappa", "phi", "doubling_c0", "r0"] {
            assert!(v.get(k).is_some());
        }
    }
}
