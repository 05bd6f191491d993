//! Periodic grid on the torus `[-L, L)`, sampled fields and their spectra.
//!
//! Spectral coefficients approximate the Fourier transform on the line,
//! `f̂(ξ_k) = ∫ f(x) e^{-iξ_k x} dx ≈ h Σ_j f_j e^{-iξ_k x_j}`, so that
//! `f(x) = (1/2L) Σ_k f̂_k e^{iξ_k x}` and `Σ_j |f_j|² h = (1/2L) Σ_k |f̂_k|²`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::FftPlan;

/// Uniform periodic grid with `N` points on `[-L, L)`.
#[derive(Clone, Debug)]
pub struct PeriodicGrid {
    half_length: f64,
    n: usize,
    plan: Arc<FftPlan>,
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl PeriodicGrid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidSize(n));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidDomain(half_length));
        }
        Ok(Self { half_length, n, plan: Arc::new(FftPlan::new(n)) })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing `h = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Signed mode number of storage index `idx`, in `-N/2..N/2`.
    pub fn mode(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Storage index of signed mode `k`.
    pub fn index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Frequency `ξ = πk/L` at storage index `idx`.
    pub fn xi(&self, idx: usize) -> f64 {
        PI * self.mode(idx) as f64 / self.half_length
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.xi(i)).collect()
    }

    /// Storage index of the unpaired Nyquist mode `-N/2`.
    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> SampledField {
        SampledField { grid: self.clone(), values: (0..self.n).map(|j| f(self.x(j))).collect() }
    }

    pub fn zeros(&self) -> SampledField {
        SampledField { grid: self.clone(), values: alloc::vec![0.0; self.n] }
    }

    pub(crate) fn plan(&self) -> &FftPlan {
        &self.plan
    }
}

/// Real samples of a function on a [`PeriodicGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: &PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Wraps values without the finiteness check; used by the solver so that
    /// blow-up can be detected and reported instead of rejected.
    pub fn from_raw(grid: &PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len());
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &Self, f: F) -> Self {
        debug_assert!(self.grid == other.grid);
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Trapezoid inner product `∫ f g dx`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.grid.spacing() * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Trapezoid integral `∫ f dx`.
    pub fn integral(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L^p` norm, `(h Σ |f_j|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
    }

    pub fn spectrum(&self) -> Spectrum {
        forward_transform(self)
    }
}

/// Fourier coefficients in storage order (see [`PeriodicGrid::mode`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

fn phase_sign(idx: usize) -> f64 {
    // e^{iξ_k L} = (-1)^k converts the DFT origin x_0 = -L to x = 0.
    if idx.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn forward_transform(field: &SampledField) -> Spectrum {
    let grid = field.grid.clone();
    let h = grid.spacing();
    let mut data: Vec<Complex64> = field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    grid.plan().forward(&mut data);
    for (i, c) in data.iter_mut().enumerate() {
        *c *= h * phase_sign(i);
    }
    Spectrum { grid, coeffs: data }
}

/// Real part of the inverse transform.
pub fn inverse_transform(spec: &Spectrum) -> SampledField {
    let values = spec.inverse_complex().into_iter().map(|c| c.re).collect();
    SampledField { grid: spec.grid.clone(), values }
}

impl Spectrum {
    pub fn new(grid: &PeriodicGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), got: coeffs.len() });
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        Self { grid: grid.clone(), coeffs: alloc::vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn inverse_complex(&self) -> Vec<Complex64> {
        let n = self.grid.len();
        let scale = 1.0 / (2.0 * self.grid.half_length());
        let mut data: Vec<Complex64> =
            self.coeffs.iter().enumerate().map(|(i, &c)| c * phase_sign(i) * scale).collect();
        self.grid.plan().inverse(&mut data);
        debug_assert_eq!(data.len(), n);
        data
    }

    pub fn to_field(&self) -> SampledField {
        inverse_transform(self)
    }

    /// Multiplies each coefficient by `symbol(ξ_k)`.
    pub fn apply_multiplier<F: Fn(f64) -> Complex64>(&self, symbol: F) -> Result<Self> {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let m = symbol(self.grid.xi(i));
            if !(m.re.is_finite() && m.im.is_finite()) {
                return Err(Error::NonFinite("multiplier symbol"));
            }
            *c *= m;
        }
        Ok(out)
    }

    /// Real-symbol variant without the finiteness check.
    pub fn apply_real<F: Fn(f64) -> f64>(&self, symbol: F) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= symbol(self.grid.xi(i));
        }
        out
    }

    /// Multiplies by a precomputed per-index symbol table.
    pub fn apply_table(&self, table: &[f64]) -> Self {
        let mut out = self.clone();
        for (c, &m) in out.coeffs.iter_mut().zip(table) {
            *c *= m;
        }
        out
    }

    /// Zeros modes with `|k| > keep_fraction · N/2`.
    pub fn dealias(&self, keep_fraction: f64) -> Self {
        let mut out = self.clone();
        let cutoff = keep_fraction * (self.grid.len() / 2) as f64;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if (self.grid.mode(i).abs() as f64) > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    pub fn zero_nyquist(mut self) -> Self {
        let i = self.grid.nyquist();
        self.coeffs[i] = Complex64::new(0.0, 0.0);
        self
    }

    /// Plancherel sum `(1/2L) Σ w(ξ_k) |f̂_k|²`, i.e. `(2π)^{-1}∫ w |f̂|² dξ`.
    pub fn weighted_energy<F: Fn(f64) -> f64>(&self, weight: F) -> f64 {
        let scale = 1.0 / (2.0 * self.grid.half_length());
        scale
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| weight(self.grid.xi(i)) * c.norm_sqr())
                .sum::<f64>()
    }

    pub fn l2_energy(&self) -> f64 {
        self.weighted_energy(|_| 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_definition() {
        let g = PeriodicGrid::new(PI, 8).unwrap();
        assert!((g.spacing() - PI / 4.0).abs() < 1e-15);
        let mut modes: Vec<i64> = (0..8).map(|i| g.mode(i)).collect();
        modes.sort();
        assert_eq!(modes, (-4..4).collect::<Vec<_>>());
        let g = PeriodicGrid::new(32.0 * PI, 1024).unwrap();
        assert!((g.spacing() - PI / 16.0).abs() < 1e-15);
        assert_eq!(PeriodicGrid::new(PI, 7), Err(Error::InvalidSize(7)));
        assert_eq!(PeriodicGrid::new(PI, 6), Err(Error::InvalidSize(6)));
        assert!(matches!(PeriodicGrid::new(-1.0, 16), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn cosine_lives_in_modes_one() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let s = g.sample(|x| x.cos()).spectrum();
        for (i, c) in s.coeffs().iter().enumerate() {
            if g.mode(i).abs() == 1 {
                // ∫_{-π}^{π} cos x e^{∓ix} dx = π
                assert!((c.re - PI).abs() < 1e-12 && c.im.abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_mode_is_integral() {
        let g = PeriodicGrid::new(3.0, 32).unwrap();
        let f = g.sample(|x| 1.0 + (PI * x / 3.0).sin());
        assert!((f.spectrum().coeffs()[0].re - 6.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_gaussian() {
        let g = PeriodicGrid::new(8.0, 256).unwrap();
        let f = g.sample(|x| (-x * x).exp());
        let direct: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.spacing();
        let spectral = f.spectrum().l2_energy();
        assert!((direct / spectral - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_power_of_two_grid_round_trips() {
        let g = PeriodicGrid::new(PI, 12).unwrap();
        let f = g.sample(|x| (2.0 * x).sin() + 0.3 * (5.0 * x).cos());
        let back = f.spectrum().to_field();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let s = g.sample(|x| 1.0 + (5.0 * x).cos() + (4.0 * x).cos()).spectrum().dealias(2.0 / 3.0);
        for (i, c) in s.coeffs().iter().enumerate() {
            if g.mode(i).abs() > 4 {
                assert_eq!(c.norm(), 0.0);
            }
        }
        assert!(s.coeffs()[g.index(4)].norm() > 1.0);
    }

    #[test]
    fn eigenfunction_multiplier() {
        let g = PeriodicGrid::new(PI, 64).unwrap();
        let f = g.sample(|x| (3.0 * x).cos());
        let out = f.spectrum().apply_multiplier(|xi| Complex64::new(xi.abs(), 0.0)).unwrap().to_field();
        for (j, v) in out.values().iter().enumerate() {
            assert!((v - 3.0 * (3.0 * g.x(j)).cos()).abs() < 1e-12);
        }
        assert!(f.spectrum().apply_multiplier(|_| Complex64::new(f64::NAN, 0.0)).is_err());
    }

    fn random_field(n: usize, seed: &[f64]) -> SampledField {
        let g = PeriodicGrid::new(2.0, n).unwrap();
        let vals = (0..n).map(|j| seed[j % seed.len()] * ((j * 7 + 3) as f64).sin()).collect();
        SampledField::new(&g, vals).unwrap()
    }

    proptest! {
        #[test]
        fn transform_round_trip(seed in proptest::collection::vec(-5.0f64..5.0, 1..40), p in 3u32..12) {
            let f = random_field(1usize << p, &seed);
            let back = f.spectrum().to_field();
            for (a, b) in f.values().iter().zip(back.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn parseval_random(seed in proptest::collection::vec(-5.0f64..5.0, 1..40), p in 3u32..11) {
            let f = random_field(1usize << p, &seed);
            let direct = f.dot(&f);
            let spectral = f.spectrum().l2_energy();
            prop_assert!((direct - spectral).abs() <= 1e-10 * direct.max(1e-300));
        }

        #[test]
        fn real_even_symbol_keeps_fields_real(seed in proptest::collection::vec(-5.0f64..5.0, 1..40)) {
            let f = random_field(128, &seed);
            let s = f.spectrum().apply_real(|xi| 1.0 / (1.0 + xi * xi));
            let z = s.inverse_complex();
            prop_assert!(z.iter().all(|c| c.im.abs() < 1e-12));
        }

        #[test]
        fn dealias_is_a_projection(seed in proptest::collection::vec(-5.0f64..5.0, 1..40), frac in 0.05f64..1.0) {
            let f = random_field(64, &seed);
            let s = f.spectrum();
            let d = s.dealias(frac);
            prop_assert!(d.l2_energy() <= s.l2_energy() * (1.0 + 1e-14));
            prop_assert_eq!(d.dealias(frac), d.clone());
            prop_assert_eq!(s.dealias(1.0), s);
        }
    }
}
