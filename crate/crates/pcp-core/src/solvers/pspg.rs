//! Accelerated proximal gradient on the partially smoothed problem.
//!
//! Only the nuclear norm is smoothed; each iteration linearizes `f_mu` at the
//! extrapolated point `Y_k` and solves
//!
//! ```text
//! min  xi ||pi_Omega(S)||_1 + <grad f_mu(Y_k), L> + ||L - Y_k||_F^2 / (2 mu)
//! s.t. ||L + S - pi_Omega(D)||_F <= delta
//! ```
//!
//! in closed form given `q(Y_k) = U diag((sigma - mu)_+) V^T` (computed
//! directly from a thresholded partial SVD, never by forming the gradient
//! first). The constraint multiplier `theta*` comes from the sorted-
//! breakpoint search in [`crate::theta`]. Iterates stay feasible, so the
//! momentum sequence retains the accelerated rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{project_mask, ObservationMask};
use crate::matrix::DenseMatrix;
use crate::problems::Instance;
use crate::prox::soft_threshold;
use crate::solvers::{
    infeasibility_denominator, lin_comb, DecompositionResult, SolveStats, VerificationReport,
};
use crate::svd::{partial_svd, singular_values, spectral_norm};
use crate::theta::find_theta;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PspgConfig {
    /// `mu0 = mu0_factor * ||pi_Omega(D)||`.
    pub mu0_factor: f64,
    /// Continuation ratio for `mu` while `k <= k_bar`.
    pub eta: f64,
    /// Iteration after which `mu` is frozen.
    pub k_bar: usize,
    /// Stopping multiplier on the instance noise level.
    pub stop_factor: f64,
    pub max_iters: usize,
    /// Root tolerance for the theta search.
    pub theta_tol: f64,
    /// `delta` at or below this fraction of `||pi_Omega(D)||_F` routes to the
    /// exact-constraint closed form.
    pub delta_zero_cutoff: f64,
    /// Successive-change tolerance used when the instance has no noise level.
    pub fallback_change_tol: f64,
    /// Check the subproblem KKT conditions at every iterate.
    pub verify_kkt: bool,
}

impl PspgConfig {
    /// Continuation and stopping values used throughout the experiments:
    /// `k_bar = 30`, `eta = 2/3`, `mu0 = 0.8 ||D||`, stop factor 0.05.
    pub fn paper_defaults() -> Self {
        Self {
            mu0_factor: 0.8,
            eta: 2.0 / 3.0,
            k_bar: 30,
            stop_factor: 0.05,
            max_iters: 500,
            theta_tol: 1e-10,
            delta_zero_cutoff: 1e-15,
            fallback_change_tol: 1e-7,
            verify_kkt: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidConfig(format!("eta must be in (0, 1], got {}", self.eta)));
        }
        if !(self.mu0_factor > 0.0 && self.stop_factor > 0.0 && self.theta_tol > 0.0) {
            return Err(Error::InvalidConfig("factors and tolerances must be positive".into()));
        }
        if !(self.delta_zero_cutoff >= 0.0) || !(self.fallback_change_tol > 0.0) {
            return Err(Error::InvalidConfig("cutoffs must be nonnegative".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        Ok(())
    }
}

impl Default for PspgConfig {
    fn default() -> Self {
        Self::paper_defaults()
    }
}

/// Which branch of the closed form produced a subproblem solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubproblemCase {
    /// Constraint inactive: `theta* = 0`.
    Interior,
    /// Constraint active: `theta* > 0` solves `phi(theta) = delta`.
    Boundary,
    /// Exact-constraint closed form for `delta = 0`.
    DeltaZero,
}

/// Closed-form minimizer of one proximal subproblem.
#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub low_rank: DenseMatrix,
    pub sparse: DenseMatrix,
    pub theta: f64,
    pub case: SubproblemCase,
}

/// `q(Y) = U diag((sigma - mu)_+) V^T` from a partial SVD with threshold
/// `mu`. Returns the matrix and the number of triplets computed.
pub fn compute_q(y: &DenseMatrix, mu: f64) -> Result<(DenseMatrix, usize)> {
    if !(mu > 0.0) {
        return Err(Error::InvalidConfig(format!("mu must be positive, got {mu}")));
    }
    let fac = partial_svd(y, mu)?;
    let count = fac.rank();
    Ok((fac.reconstruct_with(|s| s - mu), count))
}

/// Solves the generic proximal subproblem given `q = q(L~)`.
///
/// `rho` is the proximal weight (the solver passes `rho = mu`). `delta` at or
/// below `delta_zero_cutoff * ||pi_Omega(D)||_F` uses the exact-constraint
/// form; otherwise the constraint multiplier is located by the breakpoint
/// search when the unconstrained candidate is infeasible.
pub fn solve_subproblem(
    q: &DenseMatrix,
    d: &DenseMatrix,
    mask: &ObservationMask,
    xi: f64,
    rho: f64,
    delta: f64,
    theta_tol: f64,
    delta_zero_cutoff: f64,
) -> Result<SubproblemSolution> {
    q.check_same_shape(d)?;
    mask.check_shape(d)?;
    if !(xi > 0.0 && rho > 0.0) {
        return Err(Error::InvalidConfig("xi and rho must be positive".into()));
    }
    if delta < 0.0 {
        return Err(Error::InvalidConfig(format!("delta must be nonnegative, got {delta}")));
    }
    let d_obs = project_mask(d, mask)?;

    if delta <= delta_zero_cutoff * d_obs.frobenius_norm() {
        // Exact constraint: S from entrywise shrinkage at xi * rho,
        // L = pi_Omega(D) - S.
        let mut sparse = q.scale(-1.0);
        mask.for_each(|i, j| {
            sparse.set(i, j, soft_threshold(d.get(i, j) - q.get(i, j), xi * rho));
        });
        let low_rank = d_obs.sub(&sparse);
        return Ok(SubproblemSolution {
            low_rank,
            sparse,
            theta: 0.0,
            case: SubproblemCase::DeltaZero,
        });
    }

    // Magnitudes of pi_Omega(D - q).
    let mut feas_sq = 0.0;
    let mut magnitudes = Vec::with_capacity(mask.len());
    mask.for_each(|i, j| {
        let g = d.get(i, j) - q.get(i, j);
        feas_sq += g * g;
        magnitudes.push(g.abs());
    });

    if feas_sq.sqrt() <= delta {
        // Unconstrained candidate already feasible.
        let sparse = crate::mask::project_complement(q, mask)?.scale(-1.0);
        return Ok(SubproblemSolution {
            low_rank: q.clone(),
            sparse,
            theta: 0.0,
            case: SubproblemCase::Interior,
        });
    }

    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let theta = find_theta(&magnitudes, xi, rho, delta, theta_tol)?;
    let cap = xi * (1.0 + rho * theta) / theta;
    let blend = rho * theta / (1.0 + rho * theta);

    let mut sparse = q.scale(-1.0);
    let mut low_rank = q.clone();
    mask.for_each(|i, j| {
        let dv = d.get(i, j);
        let qv = q.get(i, j);
        let s = soft_threshold(dv - qv, cap);
        sparse.set(i, j, s);
        low_rank.set(i, j, blend * (dv - s) + (1.0 - blend) * qv);
    });

    Ok(SubproblemSolution {
        low_rank,
        sparse,
        theta,
        case: SubproblemCase::Boundary,
    })
}

/// Residuals of the five KKT conditions at a subproblem solution.
///
/// All values are absolute except complementary slackness, which is scaled by
/// `1/(1 + theta)` so a tight root tolerance on `phi(theta) = delta` is not
/// amplified by a large multiplier. For the exact-constraint case the scalar
/// multiplier is replaced by the implicit multiplier matrix
/// `(q - L)/rho`, and stationarity in L holds by construction.
#[derive(Debug, Clone, Copy)]
pub struct KktResiduals {
    pub stationarity_l: f64,
    pub subgradient_s: f64,
    pub primal_feasibility: f64,
    pub dual_feasibility: f64,
    pub complementary_slackness: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.stationarity_l
            .max(self.subgradient_s)
            .max(self.primal_feasibility)
            .max(self.dual_feasibility)
            .max(self.complementary_slackness)
    }
}

/// Checks a [`SubproblemSolution`] against the KKT system of the subproblem.
pub fn subproblem_kkt_residuals(
    sol: &SubproblemSolution,
    q: &DenseMatrix,
    d: &DenseMatrix,
    mask: &ObservationMask,
    xi: f64,
    rho: f64,
    delta: f64,
) -> Result<KktResiduals> {
    let d_obs = project_mask(d, mask)?;
    let l = &sol.low_rank;
    let s = &sol.sparse;
    let residual = lin_comb(&[(1.0, l), (1.0, s), (-1.0, &d_obs)]);
    let feas_norm = residual.frobenius_norm();

    if sol.case == SubproblemCase::DeltaZero {
        // Implicit multiplier matrix: Lambda = (q - L)/rho, so the
        // subgradient scaled by xi must match (L - q)/rho on the mask and
        // vanish off it.
        let mut worst = 0.0f64;
        let g_full = l.sub(q).scale(1.0 / (rho * xi));
        for i in 0..l.rows() {
            for j in 0..l.cols() {
                let g = g_full.get(i, j);
                let r = if mask.contains(i, j) {
                    let sv = s.get(i, j);
                    if sv != 0.0 {
                        (g - sv.signum()).abs()
                    } else {
                        (g.abs() - 1.0).max(0.0)
                    }
                } else {
                    g.abs() * xi // Lambda must vanish off the mask
                };
                worst = worst.max(r);
            }
        }
        return Ok(KktResiduals {
            stationarity_l: 0.0,
            subgradient_s: worst,
            primal_feasibility: feas_norm,
            dual_feasibility: 0.0,
            complementary_slackness: 0.0,
        });
    }

    let theta = sol.theta;
    // (i) Q + (L - L~)/rho + theta R = (L - q)/rho + theta R = 0.
    let stationarity_l = lin_comb(&[(1.0 / rho, l), (-1.0 / rho, q), (theta, &residual)])
        .frobenius_norm();

    // (ii) xi G + theta R = 0 with G in pi_Omega(d||pi_Omega(S)||_1).
    let mut subgradient_s = 0.0f64;
    for i in 0..l.rows() {
        for j in 0..l.cols() {
            let r = residual.get(i, j);
            let res = if mask.contains(i, j) {
                let g_req = -theta * r / xi;
                let sv = s.get(i, j);
                if sv != 0.0 {
                    (g_req - sv.signum()).abs()
                } else {
                    (g_req.abs() - 1.0).max(0.0)
                }
            } else {
                (theta * r).abs() // G vanishes off the mask
            };
            subgradient_s = subgradient_s.max(res);
        }
    }

    let primal_feasibility = (feas_norm - delta).max(0.0);
    let dual_feasibility = (-theta).max(0.0);
    let complementary_slackness = if theta > 0.0 {
        theta * (feas_norm - delta).abs() / (1.0 + theta)
    } else {
        0.0
    };

    Ok(KktResiduals {
        stationarity_l,
        subgradient_s,
        primal_feasibility,
        dual_feasibility,
        complementary_slackness,
    })
}

/// Accelerated proximal gradient loop (Algorithm "PSPG").
///
/// Initialization `L_0 = 0`, `S_0 = pi_Omega(D)`, `Y_0 = 0`, `t_0 = 1` makes
/// the first step a plain proximal-gradient step. Stops on the successive-
/// change rule `||(L,S)_{k+1} - (L,S)_k||_F / (||(L,S)_k||_F + 1) <=
/// stop_factor * noise_level`, or the fallback absolute tolerance when the
/// instance carries no noise level.
pub fn solve_pspg(instance: &Instance, cfg: &PspgConfig) -> Result<DecompositionResult> {
    cfg.validate()?;
    let mask = &instance.mask;
    let d_obs = project_mask(&instance.data, mask)?;
    let xi = instance.xi;
    let delta = instance.delta;
    let denom = infeasibility_denominator(d_obs.frobenius_norm());

    let mut mu = cfg.mu0_factor * spectral_norm(&d_obs)?;
    if !(mu > 0.0) {
        mu = 1.0;
    }

    let change_threshold = match instance.noise_level.filter(|&r| r > 0.0) {
        Some(noise) => cfg.stop_factor * noise,
        None => cfg.fallback_change_tol,
    };

    let (m, n) = d_obs.shape();
    let mut l = DenseMatrix::zeros(m, n);
    let mut l_prev; // re-set every iteration before its only read
    let mut s = d_obs.clone();
    let mut y = DenseMatrix::zeros(m, n);
    let mut t = 1.0f64;

    let mut stats = SolveStats {
        iterations: 0,
        svd_count: 0,
        lsv_count: 0,
        objective: 0.0,
        infeasibility: 0.0,
        converged: false,
        rank: 0,
        max_constraint_violation: 0.0,
        verification: None,
    };
    let mut verification = VerificationReport::default();

    for k in 0..cfg.max_iters {
        let (q, count) = compute_q(&y, mu)?;
        stats.svd_count += 1;
        stats.lsv_count += count;

        let sub = solve_subproblem(
            &q,
            &instance.data,
            mask,
            xi,
            mu,
            delta,
            cfg.theta_tol,
            cfg.delta_zero_cutoff,
        )?;

        if cfg.verify_kkt {
            let r = subproblem_kkt_residuals(&sub, &q, &instance.data, mask, xi, mu, delta)?;
            verification.max_kkt_residual = verification.max_kkt_residual.max(r.max());
        }

        let feas = lin_comb(&[(1.0, &sub.low_rank), (1.0, &sub.sparse), (-1.0, &d_obs)])
            .frobenius_norm();
        stats.max_constraint_violation = stats.max_constraint_violation.max(feas - delta).max(0.0);

        let change = if k >= 1 {
            let dl = sub.low_rank.sub(&l).frobenius_norm();
            let ds = sub.sparse.sub(&s).frobenius_norm();
            let prev = (l.frobenius_norm().powi(2) + s.frobenius_norm().powi(2)).sqrt();
            Some((dl * dl + ds * ds).sqrt() / (prev + 1.0))
        } else {
            None
        };

        l_prev = l;
        l = sub.low_rank;
        s = sub.sparse;
        stats.iterations = k + 1;
        stats.infeasibility = feas / denom;

        if let Some(ratio) = change {
            if ratio <= change_threshold {
                stats.converged = true;
                break;
            }
        }

        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let momentum = (t - 1.0) / t_next;
        y = lin_comb(&[(1.0 + momentum, &l), (-momentum, &l_prev)]);
        t = t_next;

        if k <= cfg.k_bar {
            mu *= cfg.eta;
        }
    }

    // Reporting SVD (not counted in the run statistics).
    let sigma = singular_values(&l)?;
    let top = sigma.first().copied().unwrap_or(0.0);
    stats.rank = sigma.iter().filter(|&&v| v > (1e-9 * top).max(1e-12)).count();
    let mut l1_observed = 0.0;
    mask.for_each(|i, j| l1_observed += s.get(i, j).abs());
    stats.objective = sigma.iter().sum::<f64>() + xi * l1_observed;
    if cfg.verify_kkt {
        stats.verification = Some(verification);
    }

    // The subproblem's S carries -q off the mask (it pads the equality
    // reformulation); the original problem's solution is the projected pair.
    let sparse = project_mask(&s, mask)?;

    Ok(DecompositionResult {
        low_rank: l,
        sparse,
        multiplier: None,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compute_q_equals_matrix_shrinkage() {
        let y = DenseMatrix::from_diagonal(&[3.0, 1.0, 0.2]);
        let (q, count) = compute_q(&y, 0.5).unwrap();
        let expect = DenseMatrix::from_diagonal(&[2.5, 0.5, 0.0]);
        assert!(q.sub(&expect).frobenius_norm() < 1e-12);
        assert_eq!(count, 2);

        // mu at or above the spectral norm gives zero.
        let (q, count) = compute_q(&y, 3.5).unwrap();
        assert_eq!(q.frobenius_norm(), 0.0);
        assert_eq!(count, 0);
    }

    #[test]
    fn interior_case_returns_unconstrained_candidate() {
        let d = DenseMatrix::from_vec(2, 2, vec![0.1, 0.0, 0.0, 0.1]).unwrap();
        let q = DenseMatrix::from_vec(2, 2, vec![0.1, 0.0, 0.0, 0.1]).unwrap();
        let mask = ObservationMask::full(2, 2);
        let sol = solve_subproblem(&q, &d, &mask, 0.5, 1.0, 0.5, 1e-10, 1e-15).unwrap();
        assert_eq!(sol.case, SubproblemCase::Interior);
        assert_eq!(sol.theta, 0.0);
        assert!(sol.low_rank.sub(&q).frobenius_norm() < 1e-15);
        assert_eq!(sol.sparse.frobenius_norm(), 0.0);
    }

    #[test]
    fn delta_zero_case_with_zero_q() {
        let d = DenseMatrix::from_vec(1, 3, vec![2.0, 0.05, -1.0]).unwrap();
        let q = DenseMatrix::zeros(1, 3);
        let mask = ObservationMask::full(1, 3);
        let (xi, rho) = (0.5, 0.4);
        let sol = solve_subproblem(&q, &d, &mask, xi, rho, 0.0, 1e-10, 1e-15).unwrap();
        assert_eq!(sol.case, SubproblemCase::DeltaZero);
        // S = shrink(D, xi*rho) entrywise, L = D - S.
        assert!((sol.sparse.get(0, 0) - 1.8).abs() < 1e-15);
        assert_eq!(sol.sparse.get(0, 1), 0.0);
        assert!((sol.sparse.get(0, 2) + 0.8).abs() < 1e-15);
        let lsum = sol.low_rank.add(&sol.sparse).sub(&d).frobenius_norm();
        assert!(lsum < 1e-15);
    }

    #[test]
    fn boundary_case_lands_on_the_ball() {
        let d = DenseMatrix::from_vec(2, 2, vec![3.0, -2.0, 1.0, 4.0]).unwrap();
        let q = DenseMatrix::from_vec(2, 2, vec![0.2, 0.1, -0.3, 0.0]).unwrap();
        let mask = ObservationMask::full(2, 2);
        let delta = 0.5;
        let sol = solve_subproblem(&q, &d, &mask, 0.3, 0.7, delta, 1e-12, 1e-15).unwrap();
        assert_eq!(sol.case, SubproblemCase::Boundary);
        assert!(sol.theta > 0.0);
        let feas = sol.low_rank.add(&sol.sparse).sub(&d).frobenius_norm();
        assert!((feas - delta).abs() < 1e-9, "feasibility {feas}");
        let kkt = subproblem_kkt_residuals(&sol, &q, &d, &mask, 0.3, 0.7, delta).unwrap();
        assert!(kkt.max() < 1e-8, "kkt {:?}", kkt);
    }

    #[test]
    fn t_sequence_grows_at_accelerated_rate() {
        let mut t = 1.0f64;
        for k in 0..200 {
            assert!(t >= (k as f64 + 2.0) / 2.0 - 1e-9);
            t = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        }
    }
}
