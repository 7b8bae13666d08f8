//! Radon-side machinery in the plane: analytic phantoms, sinograms, the
//! inverse Radon transform and discrete Sobolev norms.

pub mod bessel;
pub mod grid;
pub mod inverse;
pub mod phantom;
pub mod sinogram;
pub mod sobolev;

pub use grid::GridFunction2D;
pub use inverse::{inverse_radon, InverseRadonOptions};
pub use phantom::{projection_theorem_check, Phantom};
pub use sinogram::Sinogram;
pub use sobolev::{scaling_check, sobolev_norm_grid, ScalingCheck};
