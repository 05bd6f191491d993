//! Spectral discretization of the Muskat interface equation on a periodic
//! domain: operators, weighted fractional calculus, the nonlinear right-hand
//! side in its equivalent forms, a regularized time integrator, energy
//! diagnostics and an inequality-verification harness.
#![no_std]
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alpha;
pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod fft;
pub mod grid_spectral;
pub mod muskat;
pub mod operators;
pub mod quadrature;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use grid_spectral::{PeriodicGrid, SampledField, Spectrum};
