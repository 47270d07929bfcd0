//! Exact arithmetic: Gaussian rationals, formal `ħ`/`τ` scalars, multi-indices
//! and sparse commutative polynomials.

mod aux;
mod multi_index;
mod poly;
mod scalar;

pub use aux::AuxPoly;
pub use multi_index::{Exponents, MultiIndex};
pub use poly::{Affine, Amplitude, AmplitudePoly, Block, Layout, PhaseSpace, Poly, SymbolPoly, Var};
pub use scalar::{
    binomial, factorial, falling, rational, rational_int, GaussRational, Power, Rational, Scalar,
};

