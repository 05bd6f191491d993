//! Seeded band-limited random fields.
//!
//! A field is `Σ_{m=1}^{K} c_m (a_m cos(ξ_m x) + b_m sin(ξ_m x))`, `ξ_m = πm/L`,
//! with `a_m, b_m` standard normal and `c_m = m^{−slope}`, scaled so that the
//! coefficient vector has Euclidean norm `amplitude`. The coefficients depend
//! only on the seed, so the same function is sampled on every grid.

use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::grid_spectral::{PeriodicGrid, SampledField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub modes: usize,
    pub slope: f64,
    pub amplitude: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self { modes: 24, slope: 1.5, amplitude: 1.0 }
    }
}

/// Coefficients `(a_m, b_m)` of one field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldCoefficients {
    pub half_length: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FieldCoefficients {
    pub fn draw<R: Rng>(half_length: f64, spec: &FieldSpec, rng: &mut R) -> Self {
        let mut cos = Vec::with_capacity(spec.modes);
        let mut sin = Vec::with_capacity(spec.modes);
        for m in 1..=spec.modes {
            let c = (m as f64).powf(-spec.slope);
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            cos.push(c * a);
            sin.push(c * b);
        }
        let norm = cos.iter().chain(&sin).map(|v| v * v).sum::<f64>().sqrt();
        let s = if norm > 0.0 { spec.amplitude / norm } else { 0.0 };
        cos.iter_mut().chain(sin.iter_mut()).for_each(|v| *v *= s);
        Self { half_length, cos, sin }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k0 = core::f64::consts::PI / self.half_length;
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| {
                let p = k0 * (i + 1) as f64 * x;
                a * p.cos() + b * p.sin()
            })
            .sum()
    }

    pub fn sample(&self, grid: &PeriodicGrid) -> SampledField {
        debug_assert!((grid.half_length() - self.half_length).abs() < 1e-12 * self.half_length);
        grid.sample(|x| self.eval(x))
    }
}

/// Generator for trial `index` of a run seeded by `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw on `[lo, hi)` in log scale.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}
