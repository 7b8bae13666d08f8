//! Prolate spheroidal wave functions: basis construction, evaluation and
//! the quadrature every inner product on [-1, 1] goes through.

mod basis;
pub mod quadrature;
pub mod tridiag;

pub use basis::{eigen_relation_mu, Bandwidth, Coverage, PswfBasis, DEFAULT_LAMBDA_FLOOR};
pub use quadrature::GaussLegendre;
