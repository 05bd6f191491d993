//! Uniform `α`-quadrature for the singular integrals in `α`.
//!
//! Nodes are `α_j = jΔα`, `j = 0..=M`, with `Δα = h·num/den` and
//! `MΔα = extent·L`, and both signs `±α_j` are evaluated together. Shifts by
//! `α_j` are index rotations of `den` precomputed spectrally shifted copies.
//!
//! Paired trapezoid sums over all `j ≥ 0` are exact for `∫ Δ_α u dα` on modes
//! with `|ξ|Δα < 2π`, because `Σ_{j≥1} sin(jθ)/j = (π − θ)/2` on `(0, 2π)`.
//! The nodes `j > M` are restored by per-mode closures that continue the same
//! trapezoid sum to infinity.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid_spectral::{PeriodicGrid, SampledField};

/// Node layout and far-field closures of the `α`-quadrature.
#[derive(Clone, Debug)]
pub struct AlphaQuadrature {
    grid: PeriodicGrid,
    num: usize,
    den: usize,
    extent: usize,
    m: usize,
    pv_tail: Vec<f64>,
    quad_tail: Vec<f64>,
}

/// Periodic reduction of `θ` to `(−π, π]`.
fn reduce(theta: f64) -> f64 {
    let t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    if t <= -PI {
        t + 2.0 * PI
    } else {
        t
    }
}

/// `Σ_{j>M} sin(jθ)/j`.
pub fn sine_tail(theta: f64, m: usize) -> f64 {
    let t = reduce(theta);
    if t == 0.0 {
        return 0.0;
    }
    let (sign, t) = if t < 0.0 { (-1.0, -t) } else { (1.0, t) };
    let partial: f64 = (1..=m).map(|j| (j as f64 * t).sin() / j as f64).sum();
    sign * ((PI - t) / 2.0 - partial)
}

/// `Σ_{j>M} (1 − cos jθ)/j²`.
pub fn cosine_tail(theta: f64, m: usize) -> f64 {
    let t = reduce(theta).abs();
    let full = PI * t / 2.0 - t * t / 4.0;
    let partial: f64 = (1..=m).map(|j| (1.0 - (j as f64 * t).cos()) / (j * j) as f64).sum();
    full - partial
}

impl AlphaQuadrature {
    /// `Δα = h·num/den` and `α`-range `[0, extent·L]`.
    pub fn new(grid: &PeriodicGrid, num: usize, den: usize, extent: usize) -> Result<Self> {
        if num == 0 || den == 0 || extent == 0 {
            return Err(Error::InvalidParameter("alpha spacing and extent must be positive".into()));
        }
        let half = grid.len() / 2;
        if !(extent * half * den).is_multiple_of(num) {
            return Err(Error::InvalidParameter("alpha spacing must divide the alpha range".into()));
        }
        let m = extent * half * den / num;
        let dalpha = grid.spacing() * num as f64 / den as f64;
        let n = grid.len();
        let mut pv_tail = alloc::vec![0.0; n];
        let mut quad_tail = alloc::vec![0.0; n];
        for k in 0..=half {
            let theta = PI * k as f64 / grid.half_length() * dalpha;
            let s = if k == half { 0.0 } else { sine_tail(theta, m) };
            let c = cosine_tail(theta, m);
            for idx in [grid.index(k as i64), grid.index(-(k as i64))] {
                pv_tail[idx] = s * grid.mode(idx).signum() as f64;
                quad_tail[idx] = c;
            }
        }
        Ok(Self { grid: grid.clone(), num, den, extent, m, pv_tail, quad_tail })
    }

    /// `Δα = h`, `α ∈ [0, L]`.
    pub fn standard(grid: &PeriodicGrid) -> Self {
        Self::new(grid, 1, 1, 1).expect("standard layout is always valid")
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        self.grid.spacing() * self.num as f64 / self.den as f64
    }

    /// Number `M` of positive nodes.
    pub fn nodes(&self) -> usize {
        self.m
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn spacing_ratio(&self) -> (usize, usize) {
        (self.num, self.den)
    }

    pub fn alpha(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    /// Trapezoid weight of node `j` for a paired (`±α`) integrand.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 {
            0.5 * self.step()
        } else {
            self.step()
        }
    }

    /// Per-mode closure for `(1/π) Σ_{j>M} Δα (u(x+α_j) − u(x−α_j))/α_j`,
    /// applied to `u`; its symbol is `(2i/π) Σ_{j>M} sin(jθ)/j`, `θ = ξΔα`.
    pub fn pv_tail(&self, u: &SampledField) -> SampledField {
        let mut s = u.spectrum();
        for (c, &t) in s.coeffs_mut().iter_mut().zip(&self.pv_tail) {
            *c *= Complex64::new(0.0, 2.0 / PI * t);
        }
        s.to_field()
    }

    /// `Σ_{j>M} (1 − cos jθ)/j²` in storage order.
    pub fn quad_tail_symbol(&self) -> &[f64] {
        &self.quad_tail
    }

    /// Precomputes the shifted copies of `u` needed by [`Shifted::minus`] and
    /// [`Shifted::plus`].
    pub fn shifted(&self, u: &SampledField) -> Shifted {
        let mut copies = Vec::with_capacity(self.den);
        copies.push(u.values().to_vec());
        if self.den > 1 {
            let spec = u.spectrum();
            for q in 1..self.den {
                let a = self.grid.spacing() * q as f64 / self.den as f64;
                let sh = spec.apply_multiplier(|xi| {
                    let p = -xi * a;
                    Complex64::new(p.cos(), p.sin())
                });
                let mut sh = sh.expect("unit-modulus symbol");
                let ny = self.grid.nyquist();
                // keep the shifted Nyquist mode real
                let c = sh.coeffs()[ny];
                sh.coeffs_mut()[ny] = Complex64::new(c.re, 0.0);
                copies.push(sh.to_field().into_values());
            }
        }
        Shifted { copies, num: self.num, den: self.den, n: self.grid.len() }
    }
}

/// Shifted copies of one field, see [`AlphaQuadrature::shifted`].
#[derive(Clone, Debug)]
pub struct Shifted {
    copies: Vec<Vec<f64>>,
    num: usize,
    den: usize,
    n: usize,
}

/// A rotated view `v[(i + start) mod N]`.
#[derive(Clone, Copy, Debug)]
pub struct Rotated<'a> {
    data: &'a [f64],
    start: usize,
}

impl<'a> Rotated<'a> {
    pub fn iter(&self) -> impl Iterator<Item = &'a f64> + 'a {
        self.data[self.start..].iter().chain(self.data[..self.start].iter())
    }

    pub fn get(&self, i: usize) -> f64 {
        let k = i + self.start;
        if k >= self.data.len() {
            self.data[k - self.data.len()]
        } else {
            self.data[k]
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }
}

impl Shifted {
    pub fn base(&self) -> &[f64] {
        &self.copies[0]
    }

    /// Samples of `u(x_i − α_j)`.
    pub fn minus(&self, j: usize) -> Rotated<'_> {
        let m = j * self.num;
        let (s, q) = (m / self.den, m % self.den);
        let start = (self.n - s % self.n) % self.n;
        Rotated { data: &self.copies[q], start }
    }

    /// Samples of `u(x_i + α_j)`.
    pub fn plus(&self, j: usize) -> Rotated<'_> {
        let m = j * self.num;
        let (s, q) = (m / self.den, m % self.den);
        if q == 0 {
            Rotated { data: &self.copies[0], start: s % self.n }
        } else {
            Rotated { data: &self.copies[self.den - q], start: (s + 1) % self.n }
        }
    }
}
