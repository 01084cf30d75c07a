//! The two shrinkage (proximal) operators every solver is built from.

use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::svd::{partial_svd, SvdFactors};

/// Scalar soft threshold: `sgn(v) * max(|v| - t, 0)` with `sgn(0) = 0`.
#[inline]
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Entrywise soft thresholding: the minimizer of
/// `t ||S||_1 + 1/2 ||S - X||_F^2`.
pub fn shrink_entries(x: &DenseMatrix, t: f64) -> DenseMatrix {
    assert!(t >= 0.0, "shrinkage level must be nonnegative");
    x.map(|v| soft_threshold(v, t))
}

/// Singular value thresholding: the minimizer of
/// `t ||L||_* + 1/2 ||L - X||_F^2`, i.e. `U diag((sigma - t)_+) V^T`.
pub fn shrink_singular(x: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    Ok(shrink_singular_factors(x, t)?.reconstruct())
}

/// Like [`shrink_singular`] but returns the already-shrunk factors, so
/// callers can account for the number of computed singular values and reuse
/// the factorization.
pub fn shrink_singular_factors(x: &DenseMatrix, t: f64) -> Result<SvdFactors> {
    let fac = partial_svd(x, t)?;
    let singular_values = fac.singular_values.iter().map(|&s| s - t).collect();
    Ok(SvdFactors {
        left: fac.left,
        singular_values,
        right: fac.right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entrywise_formula_cases() {
        let x = DenseMatrix::from_vec(2, 2, vec![3.0, -0.5, 0.0, 1.0]).unwrap();
        let y = shrink_entries(&x, 1.0);
        assert_eq!(y.as_slice(), &[2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_level_is_identity() {
        let x = DenseMatrix::from_vec(2, 2, vec![1.5, -2.0, 0.25, 0.0]).unwrap();
        assert_eq!(shrink_entries(&x, 0.0), x);
        let y = shrink_singular(&x, 0.0).unwrap();
        assert!(y.sub(&x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn diagonal_singular_shrinkage() {
        let x = DenseMatrix::from_diagonal(&[3.0, 1.0, 0.2]);
        let y = shrink_singular(&x, 0.5).unwrap();
        let expect = DenseMatrix::from_diagonal(&[2.5, 0.5, 0.0]);
        assert!(y.sub(&expect).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rank_one_analytic_case() {
        // X = 4 u v^T with unit u, v; shrinking by 1 gives 3 u v^T.
        let u = {
            let raw = [2.0, -1.0, 2.0]; // norm 3
            DenseMatrix::from_vec(3, 1, raw.iter().map(|v| v / 3.0).collect()).unwrap()
        };
        let v = {
            let raw = [1.0, 2.0, -2.0, 4.0]; // norm 5
            DenseMatrix::from_vec(4, 1, raw.iter().map(|v| v / 5.0).collect()).unwrap()
        };
        let x = u.matmul(&v.transpose()).scale(4.0);
        let y = shrink_singular(&x, 1.0).unwrap();
        let expect = u.matmul(&v.transpose()).scale(3.0);
        assert!(y.sub(&expect).frobenius_norm() < 1e-12);
    }
}
