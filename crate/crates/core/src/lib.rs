//! Polar coded repetition over the binary erasure channel.
//!
//! A message is polar encoded, split into `r` sub-codewords, and every one
//! of the `r` repetition blocks sends the sub-codewords through its own small
//! lower-triangular kernel. Everything about such a scheme on BEC(ε) is a
//! polynomial in ε with rational coefficients, so the crate works in exact
//! arithmetic:
//!
//! - [`poly`]: rational polynomials and Sturm root counting.
//! - [`channel_algebra`]: the check/bit/repetition transforms on erasure
//!   polynomials.
//! - [`patterns`]: kernels, kernel families and assignments.
//! - [`effective_channels`]: erasure polynomials of the sub-codewords.
//! - [`search`]: exhaustive assignment search.
//! - [`proofcheck`]: capacity-gain and dominance certificates.
//! - [`codec`]: encoder, SC decoder, brute-force oracle and Monte Carlo.

pub mod channel_algebra;
pub mod codec;
pub mod effective_channels;
pub mod error;
pub mod exec;
pub mod patterns;
pub mod poly;
pub mod proofcheck;
pub mod search;

pub use error::{Error, Result};
pub use exec::Exec;
pub use poly::{Poly, Rational};
