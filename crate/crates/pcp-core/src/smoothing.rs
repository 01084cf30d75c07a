//! Nesterov smoothing of the nuclear norm and the masked l1 norm.
//!
//! `f_mu` smooths `||L||_*` by maximizing `<L, W> - mu/2 ||W||_F^2` over the
//! spectral-norm unit ball; `g_nu` smooths `xi ||pi_Omega(S)||_1` over the
//! max-norm ball of radius `xi`. Both maximizations reduce per singular value
//! / per entry to a scalar problem whose value is a Huber function; the
//! maximizers give the gradients, Lipschitz with constants `1/mu` and `1/nu`.

use crate::error::Result;
use crate::mask::ObservationMask;
use crate::matrix::DenseMatrix;
use crate::svd::partial_svd;

/// Smoothing parameters tied to a problem shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    /// Nuclear-norm smoothing parameter.
    pub mu: f64,
    /// l1-norm smoothing parameter; absent under partial smoothing where only
    /// the nuclear norm is smoothed.
    pub nu: Option<f64>,
    /// Sparsity weight.
    pub xi: f64,
    /// `min(m, n) / 2`; the common prox-ball radius of both smoothings.
    pub tau: f64,
}

/// `tau = min(m, n) / 2`.
pub fn tau_for_shape(rows: usize, cols: usize) -> f64 {
    0.5 * rows.min(cols) as f64
}

/// Default sparsity weight `1 / sqrt(max(m, n))`.
pub fn default_xi(rows: usize, cols: usize) -> f64 {
    1.0 / (rows.max(cols) as f64).sqrt()
}

/// Maps a target accuracy `epsilon` to smoothing parameters: with both terms
/// smoothed, `mu = nu = epsilon / (4 tau)`; with partial smoothing,
/// `mu = epsilon / (2 tau)` and `nu` is unset.
pub fn eps_to_params(epsilon: f64, rows: usize, cols: usize, both_smoothed: bool) -> SmoothingParams {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let tau = tau_for_shape(rows, cols);
    let xi = default_xi(rows, cols);
    if both_smoothed {
        let mu = epsilon / (4.0 * tau);
        SmoothingParams {
            mu,
            nu: Some(mu),
            xi,
            tau,
        }
    } else {
        SmoothingParams {
            mu: epsilon / (2.0 * tau),
            nu: None,
            xi,
            tau,
        }
    }
}

impl SmoothingParams {
    /// With `xi = 1/sqrt(max(m,n))` the two prox balls have equal radius:
    /// `m n xi^2 / 2 == tau`. Returns the absolute discrepancy.
    pub fn ball_radius_discrepancy(&self, rows: usize, cols: usize) -> f64 {
        (0.5 * (rows * cols) as f64 * self.xi * self.xi - self.tau).abs()
    }
}

/// Huber evaluation of the smoothed singular value:
/// `s^2/(2 mu)` for `s <= mu`, else `s - mu/2`.
#[inline]
pub(crate) fn huber_sigma(s: f64, mu: f64) -> f64 {
    if s <= mu {
        s * s / (2.0 * mu)
    } else {
        s - mu / 2.0
    }
}

/// Huber evaluation of the smoothed weighted absolute value:
/// `s^2/(2 nu)` for `|s| <= nu xi`, else `xi |s| - nu xi^2 / 2`.
#[inline]
pub(crate) fn huber_abs(s: f64, nu: f64, xi: f64) -> f64 {
    let a = s.abs();
    if a <= nu * xi {
        s * s / (2.0 * nu)
    } else {
        xi * a - nu * xi * xi / 2.0
    }
}

/// Smoothed nuclear norm `f_mu(L)`, evaluated per singular value.
pub fn f_mu_value(l: &DenseMatrix, mu: f64) -> Result<f64> {
    assert!(mu > 0.0, "mu must be positive");
    let fac = partial_svd(l, 0.0)?;
    Ok(f_mu_value_from_sigma(&fac.singular_values, mu))
}

/// [`f_mu_value`] from precomputed singular values.
pub fn f_mu_value_from_sigma(sigma: &[f64], mu: f64) -> f64 {
    sigma.iter().map(|&s| huber_sigma(s, mu)).sum()
}

/// Gradient of `f_mu`: `W_mu(L) = U diag(min(sigma/mu, 1)) V^T`. Its spectral
/// norm never exceeds one.
pub fn grad_f_mu(l: &DenseMatrix, mu: f64) -> Result<DenseMatrix> {
    assert!(mu > 0.0, "mu must be positive");
    let fac = partial_svd(l, 0.0)?;
    Ok(fac.reconstruct_with(|s| (s / mu).min(1.0)))
}

/// Smoothed masked l1 term `g_nu(S)`, summed over observed entries.
pub fn g_nu_value(s: &DenseMatrix, nu: f64, xi: f64, mask: &ObservationMask) -> Result<f64> {
    assert!(nu > 0.0 && xi > 0.0, "nu and xi must be positive");
    mask.check_shape(s)?;
    let mut acc = 0.0;
    mask.for_each(|i, j| acc += huber_abs(s.get(i, j), nu, xi));
    Ok(acc)
}

/// Gradient of `g_nu`: `Z_nu(S)` with entries `sgn(S_ij) min(|S_ij|/nu, xi)`
/// on the mask and zero elsewhere. Entries never exceed `xi` in magnitude.
pub fn grad_g_nu(
    s: &DenseMatrix,
    nu: f64,
    xi: f64,
    mask: &ObservationMask,
) -> Result<DenseMatrix> {
    assert!(nu > 0.0 && xi > 0.0, "nu and xi must be positive");
    mask.check_shape(s)?;
    let mut out = DenseMatrix::zeros(s.rows(), s.cols());
    mask.for_each(|i, j| {
        let v = s.get(i, j);
        out.set(i, j, v.signum() * (v.abs() / nu).min(xi));
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huber_forms_match_direct_scalar_maximization() {
        // h_mu(s) = max_{|w|<=1} s w - mu w^2 / 2 and
        // k_nu(s) = max_{|z|<=xi} s z - nu z^2 / 2,
        // checked on a fine grid of maximizer candidates.
        let maximize = |s: f64, half_coef: f64, bound: f64| -> f64 {
            let steps = 4000;
            let mut best = f64::NEG_INFINITY;
            for k in 0..=steps {
                let w = -bound + 2.0 * bound * k as f64 / steps as f64;
                best = best.max(s * w - half_coef * w * w / 2.0);
            }
            // include the analytic interior stationary point
            let w_star = (s / half_coef).clamp(-bound, bound);
            best.max(s * w_star - half_coef * w_star * w_star / 2.0)
        };
        for &mu in &[0.3, 1.0, 2.5] {
            for &s in &[0.0, 0.1, 0.29, 0.31, 1.0, 3.7] {
                let direct = maximize(s, mu, 1.0);
                assert!((huber_sigma(s, mu) - direct).abs() < 1e-9, "mu={mu} s={s}");
            }
        }
        for &(nu, xi) in &[(1.0, 0.5), (0.25, 1.5)] {
            for &s in &[-2.0, -0.4, 0.0, 0.3, 0.5, 2.0] {
                let direct = maximize(s, nu, xi);
                assert!((huber_abs(s, nu, xi) - direct).abs() < 1e-9, "nu={nu} s={s}");
            }
        }
    }

    #[test]
    fn f_mu_diagonal_hand_value() {
        let l = DenseMatrix::from_diagonal(&[2.0, 0.5]);
        let v = f_mu_value(&l, 1.0).unwrap();
        assert!((v - 1.625).abs() < 1e-12);
        assert_eq!(f_mu_value(&DenseMatrix::zeros(3, 3), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn grad_f_mu_diagonal_cases() {
        let l = DenseMatrix::from_diagonal(&[2.0, 0.5]);
        let w = grad_f_mu(&l, 1.0).unwrap();
        let expect = DenseMatrix::from_diagonal(&[1.0, 0.5]);
        assert!(w.sub(&expect).frobenius_norm() < 1e-12);

        // mu at least the spectral norm: nothing capped, W = L / mu.
        let w = grad_f_mu(&l, 2.0).unwrap();
        assert!(w.sub(&l.scale(0.5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn g_nu_scalar_hand_value() {
        let s = DenseMatrix::from_vec(1, 1, vec![0.3]).unwrap();
        let mask = ObservationMask::full(1, 1);
        let v = g_nu_value(&s, 1.0, 0.5, &mask).unwrap();
        assert!((v - 0.045).abs() < 1e-12);
        let z = DenseMatrix::zeros(2, 2);
        assert_eq!(g_nu_value(&z, 1.0, 0.5, &ObservationMask::full(2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn grad_g_nu_formula_and_mask() {
        let s = DenseMatrix::from_vec(1, 3, vec![0.3, 2.0, -5.0]).unwrap();
        let mask = ObservationMask::from_indices(1, 3, vec![(0, 0), (0, 1)]).unwrap();
        let z = grad_g_nu(&s, 1.0, 0.5, &mask).unwrap();
        assert!((z.get(0, 0) - 0.3).abs() < 1e-15);
        assert!((z.get(0, 1) - 0.5).abs() < 1e-15);
        assert_eq!(z.get(0, 2), 0.0);
        assert!(z.max_abs() <= 0.5 + 1e-15);
    }

    #[test]
    fn eps_mapping_and_tau() {
        let p = eps_to_params(0.1, 500, 500, true);
        assert!((p.mu - 1e-4).abs() < 1e-18);
        assert_eq!(p.nu, Some(p.mu));
        let q = eps_to_params(0.1, 500, 500, false);
        assert!((q.mu - 2e-4).abs() < 1e-18);
        assert_eq!(q.nu, None);
        assert!((tau_for_shape(144 * 176, 201) - 100.5).abs() < 1e-12);
        assert!(p.ball_radius_discrepancy(500, 500) < 1e-9);
    }
}
