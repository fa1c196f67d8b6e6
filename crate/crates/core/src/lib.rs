//! Rate-distortion bounds and exact finite-size simulation for sparse
//! graph codes used as lossy compressors of a Bernoulli(1/2) source.
//!
//! The crate has three layers:
//!
//! - [`bounds`]: closed-form and variational bounds on the effective
//!   rate-distortion function of check-regular LDGM codes and of compound
//!   LDGM/LDPC codes, together with the zero-distortion XORSAT threshold
//!   bound.
//! - [`gf2`]: sampling of the code ensembles, GF(2) encoding and solving,
//!   exhaustive maximum-likelihood encoders and exact small-instance
//!   oracles for the moment computations behind the bounds.
//! - [`experiments`]: reproducible Monte Carlo campaigns tying the two
//!   together, emitting CSV tables.
//!
//! Rates are in bits per source bit, distortion is normalized Hamming
//! distortion, and clause density is `alpha = n / m` (checks per
//! information bit).

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod seeds;

pub use error::{Error, Result};
