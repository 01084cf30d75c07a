//! Low-rank plus sparse decomposition of partially observed matrices.
//!
//! Given observations `pi_Omega(D)` of a matrix assumed to split into a
//! low-rank part `L` and a sparse part `S` (plus, optionally, dense noise
//! bounded by `delta`), this crate recovers the pair by minimizing
//! `||L||_* + xi ||pi_Omega(S)||_1` subject to
//! `||L + S - pi_Omega(D)||_F <= delta`.
//!
//! Four first-order solvers are provided:
//!
//! * [`solvers::solve_eadm`] / [`solvers::solve_iadm`]: exact and inexact
//!   alternating direction methods for the fully observed, noiseless problem,
//! * [`solvers::solve_alm`]: alternating linearization on the smoothed
//!   objective, supporting missing data,
//! * [`solvers::solve_pspg`]: accelerated proximal gradient on the partially
//!   smoothed problem, supporting missing data and a noise ball.
//!
//! Supporting modules supply the dense matrix kernel, thresholded partial
//! SVDs, Nesterov smoothing of both norms, synthetic instance generators and
//! recovery metrics.

pub mod error;
pub mod io;
pub mod mask;
pub mod matrix;
pub mod metrics;
pub mod problems;
pub mod prox;
pub mod rng;
pub mod smoothing;
pub mod solvers;
pub mod svd;
pub mod theta;

pub use error::{Error, Result};
pub use mask::{project_complement, project_mask, ObservationMask};
pub use matrix::DenseMatrix;
pub use metrics::{postprocess_sparse, recovery_errors, RelativeErrors};
pub use problems::{gen_rpcp_missing, gen_spcp, rho_from_snr, snr_from_rho, GroundTruth, Instance};
pub use prox::{shrink_entries, shrink_singular, soft_threshold};
pub use smoothing::{
    eps_to_params, f_mu_value, g_nu_value, grad_f_mu, grad_g_nu, SmoothingParams,
};
pub use solvers::{
    admm::{solve_eadm, solve_iadm, AdmmConfig},
    alm::{solve_alm, AlmConfig},
    pspg::{solve_pspg, solve_subproblem, PspgConfig, SubproblemCase, SubproblemSolution},
    DecompositionResult, RhoReference, SolveStats,
};
pub use svd::{norms, nuclear_norm, partial_svd, spectral_norm, MatrixNorms, SvdFactors};
