//! Recovery metrics and the sparse-component post-processing step.

use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::problems::GroundTruth;
use crate::prox::shrink_entries;
use crate::theta::shrink_level_for_norm;

/// Frobenius-relative recovery errors against a planted decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeErrors {
    pub rel_l: f64,
    pub rel_s: f64,
    /// Set when the reference component had zero norm, in which case the
    /// corresponding field holds the absolute error instead.
    pub l_absolute: bool,
    pub s_absolute: bool,
}

/// `relL = ||L - L0||_F / ||L0||_F` and likewise for the sparse part.
pub fn recovery_errors(
    low_rank: &DenseMatrix,
    sparse: &DenseMatrix,
    truth: &GroundTruth,
) -> Result<RelativeErrors> {
    truth.low_rank.check_same_shape(low_rank)?;
    truth.sparse.check_same_shape(sparse)?;
    let l_err = low_rank.sub(&truth.low_rank).frobenius_norm();
    let s_err = sparse.sub(&truth.sparse).frobenius_norm();
    let l_ref = truth.low_rank.frobenius_norm();
    let s_ref = truth.sparse.frobenius_norm();
    Ok(RelativeErrors {
        rel_l: if l_ref > 0.0 { l_err / l_ref } else { l_err },
        rel_s: if s_ref > 0.0 { s_err / s_ref } else { s_err },
        l_absolute: l_ref == 0.0,
        s_absolute: s_ref == 0.0,
    })
}

/// Post-processing of a recovered sparse component: the exact solution of
/// `min ||S||_1 subject to ||S + L - D||_F <= delta`.
///
/// With `R = D - L`: zero when `R` already fits in the ball, otherwise
/// `shrink_entries(R, t*)` where `t*` is the unique level with
/// `|| min(|R|, t*) ||_F = delta` (the KKT multiplier of the ball
/// constraint), found by the sorted-breakpoint search.
pub fn postprocess_sparse(
    l_sol: &DenseMatrix,
    d: &DenseMatrix,
    delta: f64,
) -> Result<DenseMatrix> {
    d.check_same_shape(l_sol)?;
    let residual = d.sub(l_sol);
    if residual.frobenius_norm() <= delta {
        return Ok(DenseMatrix::zeros(d.rows(), d.cols()));
    }
    let mut magnitudes: Vec<f64> = residual.as_slice().iter().map(|v| v.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let level = shrink_level_for_norm(&magnitudes, delta)?;
    Ok(shrink_entries(&residual, level))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth(l: DenseMatrix, s: DenseMatrix) -> GroundTruth {
        GroundTruth {
            rank: 1,
            support_size: 1,
            noise: None,
            low_rank: l,
            sparse: s,
        }
    }

    #[test]
    fn exact_recovery_scores_zero() {
        let l = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = DenseMatrix::from_vec(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let t = truth(l.clone(), s.clone());
        let e = recovery_errors(&l, &s, &t).unwrap();
        assert_eq!(e.rel_l, 0.0);
        assert_eq!(e.rel_s, 0.0);
        assert!(!e.l_absolute && !e.s_absolute);
    }

    #[test]
    fn doubled_component_scores_one() {
        let l = DenseMatrix::from_vec(1, 2, vec![3.0, 4.0]).unwrap();
        let s = DenseMatrix::from_vec(1, 2, vec![1.0, 0.0]).unwrap();
        let t = truth(l.clone(), s.clone());
        let e = recovery_errors(&l.scale(2.0), &s, &t).unwrap();
        assert!((e.rel_l - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_reference_falls_back_to_absolute() {
        let l = DenseMatrix::from_vec(1, 2, vec![1.0, 0.0]).unwrap();
        let z = DenseMatrix::zeros(1, 2);
        let t = truth(l.clone(), z.clone());
        let e = recovery_errors(&l, &DenseMatrix::from_vec(1, 2, vec![0.3, 0.4]).unwrap(), &t).unwrap();
        assert!(e.s_absolute);
        assert!((e.rel_s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn slack_constraint_returns_zero_sparse() {
        let d = DenseMatrix::from_vec(1, 2, vec![0.1, 0.1]).unwrap();
        let l = DenseMatrix::zeros(1, 2);
        let s = postprocess_sparse(&l, &d, 1.0).unwrap();
        assert_eq!(s.frobenius_norm(), 0.0);
    }

    #[test]
    fn tiny_delta_returns_full_residual() {
        let d = DenseMatrix::from_vec(1, 3, vec![2.0, -1.0, 0.5]).unwrap();
        let l = DenseMatrix::zeros(1, 3);
        let s = postprocess_sparse(&l, &d, 1e-14).unwrap();
        assert!(s.sub(&d).frobenius_norm() < 1e-13);
    }

    #[test]
    fn postprocessed_solution_sits_on_the_ball() {
        let d = DenseMatrix::from_vec(2, 3, vec![2.0, -1.0, 0.5, 0.0, 3.0, -0.25]).unwrap();
        let l = DenseMatrix::from_vec(2, 3, vec![0.1, 0.2, -0.1, 0.4, 0.5, 0.0]).unwrap();
        let delta = 0.4;
        let s = postprocess_sparse(&l, &d, delta).unwrap();
        let feas = s.add(&l).sub(&d).frobenius_norm();
        assert!((feas - delta).abs() < 1e-9, "feasibility {feas}");
    }
}
