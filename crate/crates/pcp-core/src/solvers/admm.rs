//! Exact and inexact alternating direction methods for the fully observed,
//! noiseless problem (`L + S = D`).
//!
//! Both methods minimize the augmented Lagrangian
//! `||L||_* + xi ||S||_1 - <Lambda, L+S-D> + ||L+S-D||_F^2 / (2 rho)`
//! by closed-form shrinkage steps. The inexact method (IADM) does one L-sweep
//! and one S-sweep per multiplier update; the exact method (EADM) repeats the
//! alternation until the inner iterates stall, then updates the multiplier.
//! The penalty follows the geometric continuation `rho <- eta * rho`,
//! floored to keep the SVD threshold representable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::problems::Instance;
use crate::prox::{shrink_entries, shrink_singular_factors};
use crate::solvers::{
    infeasibility_denominator, lin_comb, DecompositionResult, RhoReference, SolveStats,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmmConfig {
    /// Initial penalty is `rho0_factor` times the reference norm.
    pub rho0_factor: f64,
    pub rho0_reference: RhoReference,
    /// Continuation ratio in (0, 1].
    pub eta: f64,
    /// Stop when `||L + S - D||_F / ||D||_F` drops below this.
    pub rel_infeas_tol: f64,
    pub max_outer_iters: usize,
    /// EADM inner loop stalls when both updates move less than
    /// `inner_tol_factor * ||D||_F`.
    pub inner_tol_factor: f64,
    pub max_inner_iters: usize,
    /// Explicit penalty floor; `None` floors at `rho0 * eta^60`.
    pub rho_floor: Option<f64>,
}

impl AdmmConfig {
    /// IADM continuation defaults: `eta = 2/3`, `rho0 = 0.8 ||D||`.
    pub fn iadm_defaults() -> Self {
        Self {
            rho0_factor: 0.8,
            rho0_reference: RhoReference::SpectralData,
            eta: 2.0 / 3.0,
            rel_infeas_tol: 1e-7,
            max_outer_iters: 500,
            inner_tol_factor: 1e-6,
            max_inner_iters: 100,
            rho_floor: None,
        }
    }

    /// EADM continuation defaults: `eta = 1/6`, `rho0 = 2 ||sgn(D)||`.
    pub fn eadm_defaults() -> Self {
        Self {
            rho0_factor: 2.0,
            rho0_reference: RhoReference::SpectralSign,
            eta: 1.0 / 6.0,
            ..Self::iadm_defaults()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidConfig(format!("eta must be in (0, 1], got {}", self.eta)));
        }
        if !(self.rho0_factor > 0.0) || !(self.rel_infeas_tol > 0.0) || !(self.inner_tol_factor > 0.0) {
            return Err(Error::InvalidConfig("factors and tolerances must be positive".into()));
        }
        if self.max_outer_iters == 0 || self.max_inner_iters == 0 {
            return Err(Error::InvalidConfig("iteration budgets must be positive".into()));
        }
        if let Some(f) = self.rho_floor {
            if !(f > 0.0) {
                return Err(Error::InvalidConfig("rho_floor must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Exact minimizer of `rho ||L||_* + 1/2 ||L + S~ - D - rho Lambda~||_F^2`:
/// singular value shrinkage of `D + rho Lambda~ - S~` at level `rho`.
pub fn argmin_l_lagrangian(
    s_tilde: &DenseMatrix,
    lambda_tilde: &DenseMatrix,
    d: &DenseMatrix,
    rho: f64,
) -> Result<DenseMatrix> {
    let arg = lin_comb(&[(1.0, d), (rho, lambda_tilde), (-1.0, s_tilde)]);
    Ok(shrink_singular_factors(&arg, rho)?.reconstruct())
}

/// Exact minimizer of `rho xi ||S||_1 + 1/2 ||L~ + S - D - rho Lambda~||_F^2`:
/// entrywise shrinkage of `D + rho Lambda~ - L~` at level `rho xi`.
pub fn argmin_s_lagrangian(
    l_tilde: &DenseMatrix,
    lambda_tilde: &DenseMatrix,
    d: &DenseMatrix,
    rho: f64,
    xi: f64,
) -> DenseMatrix {
    let arg = lin_comb(&[(1.0, d), (rho, lambda_tilde), (-1.0, l_tilde)]);
    shrink_entries(&arg, rho * xi)
}

/// Inexact ADM: one alternation sweep per multiplier update.
pub fn solve_iadm(instance: &Instance, cfg: &AdmmConfig) -> Result<DecompositionResult> {
    solve_adm(instance, cfg, false)
}

/// Exact ADM: inner alternation until the sweep stalls, then one multiplier
/// update. `max_inner_iters = 1` collapses to IADM.
pub fn solve_eadm(instance: &Instance, cfg: &AdmmConfig) -> Result<DecompositionResult> {
    solve_adm(instance, cfg, true)
}

fn solve_adm(instance: &Instance, cfg: &AdmmConfig, exact: bool) -> Result<DecompositionResult> {
    cfg.validate()?;
    if instance.delta != 0.0 {
        return Err(Error::InvalidConfig(
            "EADM/IADM solve the noiseless problem; delta must be zero".into(),
        ));
    }
    if !instance.mask.is_full() {
        return Err(Error::InvalidConfig(
            "EADM/IADM require full observation; use the ALM or PSPG solvers for missing data"
                .into(),
        ));
    }

    let d = &instance.data;
    let xi = instance.xi;
    let norm_d = d.frobenius_norm();
    let denom = infeasibility_denominator(norm_d);

    let reference = cfg.rho0_reference.value(d)?;
    let mut rho = cfg.rho0_factor * reference;
    if !(rho > 0.0) {
        rho = 1.0; // zero data: any positive penalty works, loop exits at once
    }
    let rho_floor = cfg.rho_floor.unwrap_or(rho * cfg.eta.powi(60)).max(f64::MIN_POSITIVE);

    let (m, n) = d.shape();
    let mut l = DenseMatrix::zeros(m, n);
    let mut s = DenseMatrix::zeros(m, n);
    let mut lambda = DenseMatrix::zeros(m, n);

    let mut svd_count = 0usize;
    let mut lsv_count = 0usize;
    let mut nuclear_l = 0.0;
    let mut rank_l = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut infeasibility = if norm_d == 0.0 { 0.0 } else { 1.0 };

    let inner_budget = if exact { cfg.max_inner_iters } else { 1 };
    let inner_tol = cfg.inner_tol_factor * norm_d;

    'outer: for _ in 0..cfg.max_outer_iters {
        for _ in 0..inner_budget {
            let arg_l = lin_comb(&[(1.0, d), (rho, &lambda), (-1.0, &s)]);
            let fac = shrink_singular_factors(&arg_l, rho)?;
            svd_count += 1;
            lsv_count += fac.rank();
            let l_new = fac.reconstruct();
            nuclear_l = fac.singular_values.iter().sum();
            rank_l = fac.rank();

            let s_new = argmin_s_lagrangian(&l_new, &lambda, d, rho, xi);

            let stalled = exact
                && l_new.sub(&l).frobenius_norm().max(s_new.sub(&s).frobenius_norm()) <= inner_tol;
            l = l_new;
            s = s_new;
            if stalled {
                break;
            }
        }

        let residual = lin_comb(&[(1.0, &l), (1.0, &s), (-1.0, d)]);
        lambda = lambda.add_scaled(&residual, -1.0 / rho);
        infeasibility = residual.frobenius_norm() / denom;
        iterations += 1;
        if infeasibility < cfg.rel_infeas_tol {
            converged = true;
            break 'outer;
        }
        rho = (cfg.eta * rho).max(rho_floor);
    }

    let objective = nuclear_l + xi * s.l1_norm();
    Ok(DecompositionResult {
        low_rank: l,
        sparse: s,
        multiplier: Some(lambda),
        stats: SolveStats {
            iterations,
            svd_count,
            lsv_count,
            objective,
            infeasibility,
            converged,
            rank: rank_l,
            max_constraint_violation: 0.0,
            verification: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::ObservationMask;

    fn instance_from(d: DenseMatrix) -> Instance {
        let (m, n) = d.shape();
        Instance {
            xi: 1.0 / (m.max(n) as f64).sqrt(),
            mask: ObservationMask::full(m, n),
            delta: 0.0,
            noise_level: None,
            ground_truth: None,
            origin: None,
            data: d,
        }
    }

    #[test]
    fn diagonal_l_subproblem_is_diagonal_shrinkage() {
        // D + rho Lambda - S = Diag(3, 1), rho = 0.5
        let d = DenseMatrix::from_diagonal(&[3.0, 1.0]);
        let z = DenseMatrix::zeros(2, 2);
        let l = argmin_l_lagrangian(&z, &z, &d, 0.5).unwrap();
        let expect = DenseMatrix::from_diagonal(&[2.5, 0.5]);
        assert!(l.sub(&expect).frobenius_norm() < 1e-12);

        // rho at least the spectral norm: argument shrinks to zero.
        let l = argmin_l_lagrangian(&z, &z, &d, 3.0).unwrap();
        assert_eq!(l.frobenius_norm(), 0.0);
    }

    #[test]
    fn s_subproblem_formula_cases() {
        let d = DenseMatrix::from_vec(1, 2, vec![2.0, 0.1]).unwrap();
        let z = DenseMatrix::zeros(1, 2);
        // rho * xi = 0.3
        let s = argmin_s_lagrangian(&z, &z, &d, 0.3, 1.0);
        assert!((s.get(0, 0) - 1.7).abs() < 1e-15);
        assert_eq!(s.get(0, 1), 0.0);
        // level above the max magnitude zeroes everything
        let s = argmin_s_lagrangian(&z, &z, &d, 2.5, 1.0);
        assert_eq!(s.frobenius_norm(), 0.0);
    }

    #[test]
    fn zero_data_converges_immediately() {
        let inst = instance_from(DenseMatrix::zeros(5, 4));
        for solver in [solve_iadm, solve_eadm] {
            let r = solver(&inst, &AdmmConfig::iadm_defaults()).unwrap();
            assert_eq!(r.stats.iterations, 1);
            assert!(r.stats.converged);
            assert_eq!(r.low_rank.frobenius_norm(), 0.0);
            assert_eq!(r.sparse.frobenius_norm(), 0.0);
        }
    }

    #[test]
    fn eadm_with_single_inner_iteration_equals_iadm() {
        let d = DenseMatrix::from_fn(12, 10, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0);
        let inst = instance_from(d);
        let mut cfg = AdmmConfig::iadm_defaults();
        cfg.max_outer_iters = 12;
        let iadm = solve_iadm(&inst, &cfg).unwrap();
        let mut cfg1 = cfg.clone();
        cfg1.max_inner_iters = 1;
        let eadm = solve_eadm(&inst, &cfg1).unwrap();
        assert_eq!(iadm.low_rank, eadm.low_rank);
        assert_eq!(iadm.sparse, eadm.sparse);
        assert_eq!(iadm.stats.svd_count, eadm.stats.svd_count);
    }

    #[test]
    fn rejects_missing_data_and_noise() {
        let mut inst = instance_from(DenseMatrix::zeros(3, 3));
        inst.delta = 0.1;
        assert!(solve_iadm(&inst, &AdmmConfig::iadm_defaults()).is_err());
        inst.delta = 0.0;
        inst.mask = ObservationMask::from_indices(3, 3, vec![(0, 0)]).unwrap();
        assert!(solve_eadm(&inst, &AdmmConfig::eadm_defaults()).is_err());
    }
}
