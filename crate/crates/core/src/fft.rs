//! In-place FFT: iterative radix-2 for power-of-two lengths, Bluestein's
//! chirp-z reduction otherwise.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::Float;

/// Precomputed tables for one transform length.
#[derive(Debug)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
    chirp: Option<Chirp>,
}

#[derive(Debug)]
struct Chirp {
    inner: alloc::boxed::Box<FftPlan>,
    w: Vec<Complex64>,
    kernel: Vec<Complex64>,
}

impl FftPlan {
    /// Plan for length `n >= 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "FFT length must be positive");
        if !n.is_power_of_two() {
            return Self::bluestein(n);
        }
        let twiddles = (0..n / 2)
            .map(|k| {
                let a = -2.0 * PI * (k as f64) / (n as f64);
                Complex64::new(a.cos(), a.sin())
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self { n, twiddles, bitrev, chirp: None }
    }

    fn bluestein(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let inner = FftPlan::new(m);
        let w: Vec<Complex64> = (0..n)
            .map(|j| {
                let q = (j * j) % (2 * n);
                let a = -PI * q as f64 / n as f64;
                Complex64::new(a.cos(), a.sin())
            })
            .collect();
        let mut kernel = alloc::vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = w[0].conj();
        for j in 1..n {
            kernel[j] = w[j].conj();
            kernel[m - j] = w[j].conj();
        }
        inner.forward(&mut kernel);
        Self {
            n,
            twiddles: Vec::new(),
            bitrev: Vec::new(),
            chirp: Some(Chirp { inner: alloc::boxed::Box::new(inner), w, kernel }),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward transform, `X_k = sum_j x_j e^{-2 pi i jk/n}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// Unnormalized inverse transform (positive exponent, no 1/n).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.n);
        if let Some(ch) = &self.chirp {
            if inverse {
                data.iter_mut().for_each(|c| *c = c.conj());
            }
            let m = ch.kernel.len();
            let mut buf = alloc::vec![Complex64::new(0.0, 0.0); m];
            for j in 0..self.n {
                buf[j] = data[j] * ch.w[j];
            }
            ch.inner.forward(&mut buf);
            for (b, k) in buf.iter_mut().zip(&ch.kernel) {
                *b *= k;
            }
            ch.inner.inverse(&mut buf);
            let scale = 1.0 / m as f64;
            for k in 0..self.n {
                data[k] = buf[k] * ch.w[k] * scale;
            }
            if inverse {
                data.iter_mut().for_each(|c| *c = c.conj());
            }
            return;
        }
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}
