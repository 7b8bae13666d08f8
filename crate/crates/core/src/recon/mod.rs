//! End-to-end pipelines: exact and regularized reconstruction in one and
//! two dimensions, the noise model and stability sweeps.

pub mod data;
pub mod pipeline;
pub mod sweep;

pub use data::{FourierData, Provenance};
pub use pipeline::{
    h_minus_half_error, lemma13_bound_1d, per_angle_coefficients, projection_error_1d, reconstruct_exact_1d,
    reconstruct_exact_2d, reconstruct_regularized, reconstruct_regularized_1d, reconstruct_regularized_2d,
    sinogram_bound_2d, slice_coefficients, Recon2dOptions, Reconstruction, Reconstruction1D, Reconstruction2D,
};
pub use sweep::{fit_two_term, stability_sweep, SweepConfig, SweepResult, SweepRow, TwoTermFit};
