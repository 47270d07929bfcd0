//! One-dimensional grid realization of the operator formulas.
//!
//! Position samples `x_k = (k − N/2)Δ` and momentum samples
//! `p_m = (m − N/2)·2πħ/L` are mutually dual under the centered transform.
//! Everything is periodic in the box, so states and symbols must decay at
//! its edge.

mod antiwick;
mod fourier;
mod grid;
mod operator;
mod phase;
mod quadrature;
mod shubin;

pub use antiwick::{antiwick_apply, antiwick_dense, q_norm_estimate};
pub use fourier::{symplectic_ft, CenteredFft};
pub use grid::{NumericParams, SampledSymbol, SampledWavefunction, Taper, UniformGrid};
pub use operator::{
    apply_op_poly, apply_operator, apply_tau, bj_weyl_symbol_numeric, null_point, operator_norm_probe, sinc,
    windowed_plane_wave, NumericScheme,
};
pub use phase::{grossmann_royer_apply, heisenberg_shift, reflect, weyl_via_reflections};
pub use quadrature::gauss_legendre_unit;
pub use shubin::{estimate_shubin_order, ShubinOrderEstimate};
