//! Analytically continued S-matrices for 1-D Schrödinger operators with
//! compactly supported, possibly complex PT-symmetric potentials.
//!
//! The library computes the 2×2 S-matrix S(k) on the upper complex
//! half-plane by two independent routes — directly from generalized
//! reflection/transmission coefficients, and through the image-set matrix
//! T_k with S = [I − 2(1−ik)T_k][I − 2(1+ik)T_k]⁻¹ — checks the symmetry
//! relations the theory predicts (PT covariance, Hermitian analyticity,
//! contraction, real-axis unitarity, metric intertwining), and recovers the
//! metric operator e^Q of a C-symmetry from S-matrix samples.

pub mod acceptance;
pub mod cli;
pub mod coeffs;
pub mod config;
pub mod error;
pub mod imageset;
pub mod inverse;
pub mod mat2;
pub mod potential;
pub mod propagate;
pub mod smatrix;
pub mod verify;

pub use coeffs::{
    beta_from_gamma, point_interaction_coefficients, scattering_coefficients,
    ScatteringCoefficients,
};
pub use error::{Error, Result};
pub use imageset::{
    boundary_triplet_coords, coefficients_from_boundary, image_set_determinant, tk_closed_form,
    tk_from_boundary_data, traveling_wave_boundary_values, BoundaryData, TkMatrix,
};
pub use inverse::{
    c_operator, constrain_q, recover_metric, recover_metric_general, MetricEstimate,
};
pub use mat2::Mat2C;
pub use potential::{Potential, Segment};
pub use propagate::{transfer_matrix, transfer_matrix_sampled, Wavenumber};
pub use smatrix::{
    sample_point, samples_to_json, smatrix_from_coeffs, smatrix_from_tk, smatrix_grid,
    write_samples_csv, GridSpec, Route, SMatrixSample, SampleStatus,
};
pub use verify::{
    cauchy_riemann_residual, check_contraction, check_hermitian_analyticity,
    check_metric_relations, check_pt_relation, check_unitarity, RelationResiduals, Tolerances,
};
