//! Pseudospectral split-step solver for the focusing Davey-Stewartson II
//! system and the 1+1 dimensional quintic nonlinear Schrödinger equation.
//!
//! The building blocks:
//!
//! - [`grid`]: periodic collocation grids and their wavenumber lattices.
//! - [`fourier`]: slab-decomposed 2d FFT with an explicit all-to-all
//!   transpose, plus spectral multiplier application.
//! - [`splitting`]: fourth-order Yoshida composition of two exact flows.
//! - [`dsii`]: the DS II sub-flows (linear Fourier phase, nonlocal
//!   phase rotation through the mean field Φ) and time stepper.
//! - [`nls1d`]: the quintic NLS solver sharing the same splitting.
//! - [`solutions`]: exact lump / Ozawa solutions and the perturbation
//!   scenario catalog.
//! - [`diagnostics`]: conserved quantities, the ΔE = |1 - E(t)/E(0)|
//!   blowup indicator, and spectral resolution monitoring.
//!
//! All numerics are generic over the scalar type through [`Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod diagnostics;
pub mod dsii;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod nls1d;
pub mod real;
pub mod solutions;
pub mod splitting;

pub use error::{Error, Result};
pub use real::Real;

/// Complex scalar used throughout.
pub type Complex<T> = num_complex::Complex<T>;

// Concrete double-precision aliases.
pub type GridSpec64 = grid::GridSpec<f64>;
pub type SlabField64 = fourier::SlabField<f64>;
pub type Fft2d64 = fourier::Fft2d<f64>;
pub type Field1D64 = nls1d::Field1D<f64>;
pub type TimeSeries64 = diagnostics::TimeSeries<f64>;
pub type BlowupReport64 = diagnostics::BlowupReport<f64>;
