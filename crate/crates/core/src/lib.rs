//! Reconstruction of a compactly supported function from its Fourier
//! transform on a ball.
//!
//! In one dimension the finite Fourier operator F_c is inverted on a
//! truncated prolate spheroidal (PSWF) expansion; in two dimensions the
//! problem is reduced to one-dimensional inversions per direction through
//! the projection theorem and then closed with an inverse Radon transform.
//!
//! Module map:
//! - [`pswf`]: PSWF basis, eigenvalues chi / lambda / mu, quadrature.
//! - [`bandlimit`]: F_c, projections, truncated inverse, the truncation rule.
//! - [`radon`]: phantoms, sinograms, inverse Radon, discrete Sobolev norms.
//! - [`recon`]: end-to-end pipelines, noise model, stability sweeps.
//! - [`cli`]: the `pswf-recon` command line.

pub mod bandlimit;
pub mod cli;
pub mod error;
pub mod pswf;
pub mod radon;
pub mod recon;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
