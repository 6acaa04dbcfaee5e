pub mod cli;
pub mod error;
pub mod finite_eta;
pub mod hasse_global;
pub mod kernel_integrals;
pub mod proto_zeros;
pub mod quadrature;
pub mod weyl;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::{ComplexPoint, PrecisionContext};
