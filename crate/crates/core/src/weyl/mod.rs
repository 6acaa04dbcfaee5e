//! Exact symbolic kernel for the Weyl algebra `A₁`: generators `a`, `b`
//! with `[b, a] = u`, `u` central and kept as a polynomial variable.

pub mod algebra;
pub mod apow;
pub mod frames;
pub mod gauss;
pub mod poly;
pub mod text;

pub use algebra::{
    a_pow, b_pow, commutator, equilibrium_identity_check, equilibrium_target, lemma_suite,
    normal_order, normal_order_with, operator_power_truncated, oscillator_h, Generator,
    LemmaCheck, LemmaReport, Letter, WeylPoly, WeylWord,
};
pub use apow::{binom_coeff, clifford_contains, pi_s, Side};
pub use frames::{rest_frames, Phase, RestFrame};
pub use gauss::GaussRational;
pub use poly::{Coeff, SPoly, UPoly};
