//! Compute-and-forward relaying with per-transmitter phase precoding.
//!
//! A relay observing `y = Σ hℓ xℓ + z` decodes an integer linear combination
//! `Σ aℓ xℓ` of the transmitted lattice codewords instead of the individual
//! messages. The achievable rate for a coefficient vector `a ∈ Z[i]^L` is
//! governed by the quadratic form `a M aᴴ` of a Gram matrix built from the
//! channel and the SNR. Rotating each transmitter by a unit-modulus phase
//! aligns the effective channel with `a` and strictly improves that rate.
//!
//! The crate provides, bottom up:
//!
//! - [`lattice`]: Gaussian-integer quantization and modulo-lattice reduction.
//! - [`rate`]: computation rate, MMSE scaling, effective-noise energy, the
//!   phase-precoded rate and its closed-form optimum, real embeddings.
//! - [`precode`]: optimal phase construction, with phases folded into
//!   `[-π/4, π/4]` by absorbing Gaussian units into the coefficients.
//! - [`search`]: coefficient-vector searchers — quantized exhaustive search
//!   (QES), exhaustive sphere baseline, Cholesky sphere decoder, and an
//!   LLL-assisted decoder — with operation counts.
//! - [`codec`]: construction-A lattice code over `Z[i]` with relay-side
//!   equation decoding and error detection.
//! - [`field`]: exact arithmetic over `F_{p²} = F_p[i]` and destination-side
//!   message recovery.
//! - [`sim`]: deterministic Monte Carlo experiments (rate CDFs, equation
//!   error rates, empirical degrees-of-freedom slopes, searcher benchmarks).

// Index loops read better than iterator chains in the matrix code.
#![allow(clippy::needless_range_loop)]

pub mod codec;
pub mod error;
pub mod field;
pub mod lattice;
pub mod precode;
pub mod rate;
pub mod rng;
pub mod search;
pub mod sim;

pub use error::Error;

/// Complex scalar used for all floating-point signal arithmetic.
pub type Cplx = num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
