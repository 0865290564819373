//! Simulation laboratory for α-time Brownian motion `Z_t = X(Y_t)` and its
//! folded variant `Z¹_t = X(|Y_t|)`, where `X` is a two-sided Brownian motion
//! and `Y` an independent symmetric α-stable clock normalized so that
//! `E exp(iξ Y_t) = exp(-t|ξ|^α)`.
//!
//! The crate samples these processes exactly in distribution at grid
//! resolution, computes the principal Dirichlet eigenvalue of the fractional
//! Laplacian on `[-1, 1]` (the quantity every limit constant of the process
//! is built from), and estimates small-deviation probabilities, local times,
//! occupation fields and iterated-logarithm traces, each cross-checked
//! against an independent route where one exists.
//!
//! Normalization note: with the characteristic function above, `alpha = 2`
//! is Brownian motion run at twice the usual speed (`Var Y_t = 2t`). All
//! constants downstream inherit this convention; the classical first exit
//! eigenvalue of `[-1, 1]` becomes `π²/4` rather than `π²/8`.

pub mod brownian;
pub mod constants;
pub mod error;
pub mod harness;
pub mod iterated;
pub mod localtime;
pub mod rng;
pub mod smallball;
pub mod spectral;
pub mod stable;
pub mod stats;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
