//! Pseudo-spectral field arithmetic on the periodic box `T^3 = [-pi, pi]^3`.
//!
//! Fields are truncated Fourier series held as complex coefficient cubes.
//! Differential operators, projectors and semigroups act as exact Fourier
//! multipliers; nonlinear terms are formed pointwise on the collocation grid
//! with two-thirds dealiasing available for solver use.

mod error;
mod fft;
mod field;
mod grid;
pub mod io;
pub mod ops;
pub mod synth;

pub use error::SpectralError;
pub use fft::Fft3;
pub use field::{fd5_weights, Component, SpectralField, TimeSeries};
pub use grid::{Grid, GridSpec};

pub type Complex64 = num_complex::Complex<f64>;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, SpectralError>;

/// Volume of the spatial torus.
pub const TORUS_VOLUME: f64 = 8.0 * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI;
