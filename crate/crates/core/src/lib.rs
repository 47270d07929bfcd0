//! Exact and numeric calculus for Born–Jordan, Weyl and Shubin τ quantization.
//!
//! The exact layer ([`exact`], [`ordering`], [`quantize`], [`transform`],
//! [`symlang`]) works with polynomial symbols over Gaussian rationals with a
//! formal `ħ`. The numeric layer ([`numeric`]) applies the same operators to
//! sampled wave functions on a periodic one-dimensional grid.

pub mod error;
pub mod exact;
pub mod numeric;
pub mod ordering;
pub mod quantize;
pub mod symlang;
pub mod transform;
pub mod verify;

pub use error::{Error, ParseErrorKind, Result};
pub use exact::{AmplitudePoly, MultiIndex, Rational, Scalar, SymbolPoly};
pub use ordering::OpPoly;
pub use quantize::{Scheme, TauParam};
