//! Pseudo-spectral workbench for intermittent Beltrami constructions on T³.
//!
//! Fields live in Fourier space on a uniform periodic grid. Conventions,
//! fixed once: the forward transform divides by n³ so that `c(0)` is the
//! field mean and `f(x) = Σ_k c(k) e^{i k·x}`; L² norms follow Parseval,
//! `∫|f|² dx = (2π)³ Σ|c(k)|²`. Nonlinear terms are evaluated with 3/2-rule
//! zero padding, so retained coefficients of pairwise products are exact
//! sharp truncations. All frequency cutoffs are sharp Euclidean-ball
//! projections.

pub mod error;
pub mod beltrami;
pub mod fft;
pub mod field;
pub mod identities;
pub mod grid;
pub mod intermittent;
pub mod norms;
pub mod ops;
pub mod sample;
pub mod sparse;

pub use error::{Error, Result};
pub use field::SpectralField;
pub use grid::Grid;
