//! Decomposition solvers and their shared result types.

pub mod admm;
pub mod alm;
pub mod pspg;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::svd::spectral_norm;

/// Which norm of the (observed) data the initial penalty is scaled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoReference {
    /// Spectral norm of the observed data.
    SpectralData,
    /// Spectral norm of the sign matrix of the data.
    SpectralSign,
    /// Frobenius norm of the observed data.
    FrobeniusObserved,
}

impl RhoReference {
    pub(crate) fn value(self, d_obs: &DenseMatrix) -> Result<f64> {
        match self {
            RhoReference::SpectralData => spectral_norm(d_obs),
            RhoReference::SpectralSign => {
                spectral_norm(&d_obs.map(|v| if v == 0.0 { 0.0 } else { v.signum() }))
            }
            RhoReference::FrobeniusObserved => Ok(d_obs.frobenius_norm()),
        }
    }
}

/// Residual audits collected when a solver runs in verification mode.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Worst stationarity residual of the low-rank update (threshold-0 check).
    pub max_l_update_residual: f64,
    /// Worst entrywise stationarity residual of the sparse update.
    pub max_s_update_residual: f64,
    /// Worst subproblem KKT residual across iterations.
    pub max_kkt_residual: f64,
    /// Times the frozen-parameter objective failed to decrease monotonically.
    pub objective_trend_violations: usize,
}

/// Run statistics attached to every solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveStats {
    pub iterations: usize,
    /// Partial SVDs computed inside the iteration loop.
    pub svd_count: usize,
    /// Total singular triplets returned by those SVDs ("lsv").
    pub lsv_count: usize,
    /// Final `||L||_* + xi ||pi_Omega(S)||_1`.
    pub objective: f64,
    /// Final `||L + S - pi_Omega(D)||_F` relative to `||pi_Omega(D)||_F`
    /// (absolute when the observed data is zero).
    pub infeasibility: f64,
    pub converged: bool,
    /// Rank of the returned low-rank component.
    pub rank: usize,
    /// Largest `||L + S - pi_Omega(D)||_F - delta` seen over the iterates
    /// (meaningful for the ball-constrained solver; zero elsewhere).
    pub max_constraint_violation: f64,
    pub verification: Option<VerificationReport>,
}

/// A recovered decomposition plus run statistics.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub low_rank: DenseMatrix,
    pub sparse: DenseMatrix,
    /// Final Lagrange multiplier, for solvers that maintain one explicitly.
    pub multiplier: Option<DenseMatrix>,
    pub stats: SolveStats,
}

/// One-pass linear combination of same-shape matrices.
pub(crate) fn lin_comb(terms: &[(f64, &DenseMatrix)]) -> DenseMatrix {
    let (first_coef, first) = terms[0];
    let mut out = first.scale(first_coef);
    let data = out.as_mut_slice();
    for &(coef, mat) in &terms[1..] {
        for (o, &v) in data.iter_mut().zip(mat.as_slice()) {
            *o += coef * v;
        }
    }
    out
}

/// Relative infeasibility denominator: the reference norm, or 1 when the
/// observed data is identically zero.
pub(crate) fn infeasibility_denominator(norm: f64) -> f64 {
    if norm > 0.0 {
        norm
    } else {
        1.0
    }
}
