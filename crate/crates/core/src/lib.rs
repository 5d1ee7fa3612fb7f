//! Spectral toolkit for the Hill operator −y″ + q y = λ y on [0, 1] with a
//! zero-mean, band-limited periodic potential q.

pub mod asymptotics;
pub mod diffpoly;
pub mod odecore;
pub mod error;
pub mod fourier;
pub mod potential;
pub mod products;
pub mod scalar;
pub mod spectra;
pub mod verify;

pub use error::{HillError, Result};
pub use potential::{Pairing, Potential};
pub use scalar::Real;

/// Double-precision potential.
pub type Potential64 = Potential<f64>;
/// Single-precision potential.
pub type Potential32 = Potential<f32>;
/// Potential with exact rational coefficients.
pub type RationalPotential = Potential<num_rational::BigRational>;
