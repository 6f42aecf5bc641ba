//! Invertible GF(2) encoding matrices for fountain codes.
//!
//! An encoding matrix `R` maps `k` input bits `x` to `k` output bits `y = R x`
//! over GF(2); when `R` is invertible the input is recovered as `x = R^-1 y`.
//!
//! - [`gf2`]: bit-packed vectors and matrices, elimination, inverse, powers.
//! - [`matrixgen`]: Ideal Soliton sampling, full-rank generation, the bidiagonal matrix.
//! - [`codec`]: encode, decode, matrix order and cycle decoding.
//! - [`permgroup`]: the permutation of `{0,1}^k` induced by `R`, and group-axiom checks.
//! - [`entropy`]: binary entropy, empirical cost, exact zero-output probabilities.
//! - [`experiments`]: seeded Monte Carlo runs of the entropy-reduction experiments.

pub mod codec;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod matrixgen;
pub mod permgroup;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
