//! Thresholded partial SVD and SVD-derived norms.
//!
//! `partial_svd(X, t)` returns exactly the singular triplets with singular
//! value strictly above `t`. Small problems (`min(m, n) <= 512`) use a dense
//! Golub-Kahan SVD and filter; larger ones run Lanczos bidiagonalization with
//! full reorthogonalization, growing the subspace (10, 20, 40, ...) until the
//! smallest converged value drops to the threshold or the space is exhausted.

use crate::error::{Error, Result};
use crate::mask::ObservationMask;
use crate::matrix::DenseMatrix;

/// Largest `min(m, n)` routed to the dense SVD path.
pub const DENSE_SVD_CUTOFF: usize = 512;

/// Relative residual below which a Lanczos Ritz pair counts as converged.
const LANCZOS_REL_TOL: f64 = 1e-10;

/// Partial SVD factors: `k` triplets with column-orthonormal blocks.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// m-by-k left singular vectors.
    pub left: DenseMatrix,
    /// Nonincreasing positive singular values.
    pub singular_values: Vec<f64>,
    /// n-by-k right singular vectors.
    pub right: DenseMatrix,
}

impl SvdFactors {
    /// Number of triplets.
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    /// `U diag(s) V^T` for the stored values.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|s| s)
    }

    /// `U diag(f(s)) V^T`: rebuilds with transformed singular values.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        if self.is_empty() {
            return DenseMatrix::zeros(m, n);
        }
        let k = self.rank();
        let mut scaled = self.left.clone();
        {
            let data = scaled.as_mut_slice();
            for r in 0..m {
                for (c, &s) in self.singular_values.iter().enumerate() {
                    data[r * k + c] *= f(s);
                }
            }
        }
        scaled.matmul(&self.right.transpose())
    }

    /// Largest deviation of `U^T U` and `V^T V` from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let gram_residual = |b: &DenseMatrix| {
            let g = b.transpose().matmul(b);
            let k = g.rows();
            let mut worst: f64 = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((g.get(i, j) - target).abs());
                }
            }
            worst
        };
        gram_residual(&self.left).max(gram_residual(&self.right))
    }
}

fn empty_factors(m: usize, n: usize) -> SvdFactors {
    // Placeholder single zero column; `rank()` is 0 and reconstruct() short-
    // circuits, so the blocks are never consumed.
    SvdFactors {
        left: DenseMatrix::zeros(m, 1),
        singular_values: Vec::new(),
        right: DenseMatrix::zeros(n, 1),
    }
}

/// Singular triplets of `x` with value strictly above `threshold`,
/// nonincreasing order.
pub fn partial_svd(x: &DenseMatrix, threshold: f64) -> Result<SvdFactors> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "SVD threshold must be nonnegative, got {threshold}"
        )));
    }
    if x.rows().min(x.cols()) <= DENSE_SVD_CUTOFF {
        dense_partial_svd(x, threshold)
    } else {
        lanczos_partial_svd(x, threshold)
    }
}

/// Largest singular value (values-only computation).
pub fn spectral_norm(x: &DenseMatrix) -> Result<f64> {
    if x.rows().min(x.cols()) <= DENSE_SVD_CUTOFF {
        Ok(dense_singular_values(x)?.first().copied().unwrap_or(0.0))
    } else {
        let fac = lanczos_top(x, 1)?;
        Ok(fac.singular_values.first().copied().unwrap_or(0.0))
    }
}

/// Sum of all singular values.
pub fn nuclear_norm(x: &DenseMatrix) -> Result<f64> {
    let vals = singular_values(x)?;
    Ok(vals.iter().sum())
}

/// All singular values of `x`, nonincreasing.
pub fn singular_values(x: &DenseMatrix) -> Result<Vec<f64>> {
    if x.rows().min(x.cols()) <= DENSE_SVD_CUTOFF {
        dense_singular_values(x)
    } else {
        Ok(lanczos_partial_svd(x, 0.0)?.singular_values)
    }
}

/// The norm bundle used by reporting and termination code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms {
    pub frobenius: f64,
    pub spectral: f64,
    pub nuclear: f64,
    pub l1: f64,
    pub linf: f64,
    /// Sum of |X_ij| over the mask, when one is supplied.
    pub l1_masked: Option<f64>,
}

/// Standard norms of `x`; spectral and nuclear come from one SVD.
pub fn norms(x: &DenseMatrix, mask: Option<&ObservationMask>) -> Result<MatrixNorms> {
    let vals = singular_values(x)?;
    let l1_masked = match mask {
        Some(m) => {
            m.check_shape(x)?;
            let mut acc = 0.0;
            m.for_each(|i, j| acc += x.get(i, j).abs());
            Some(acc)
        }
        None => None,
    };
    Ok(MatrixNorms {
        frobenius: x.frobenius_norm(),
        spectral: vals.first().copied().unwrap_or(0.0),
        nuclear: vals.iter().sum(),
        l1: x.l1_norm(),
        linf: x.max_abs(),
        l1_masked,
    })
}

// ---------------------------------------------------------------------------
// Dense path
// ---------------------------------------------------------------------------

fn to_na(x: &DenseMatrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(x.rows(), x.cols(), x.as_slice())
}

fn svd_iteration_budget(min_dim: usize) -> usize {
    100 * min_dim.max(8) + 1000
}

fn dense_singular_values(x: &DenseMatrix) -> Result<Vec<f64>> {
    let min_dim = x.rows().min(x.cols());
    let svd = nalgebra::SVD::try_new(to_na(x), false, false, f64::EPSILON, svd_iteration_budget(min_dim))
        .ok_or(Error::SvdNonConvergence)?;
    let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

fn dense_partial_svd(x: &DenseMatrix, threshold: f64) -> Result<SvdFactors> {
    let (m, n) = x.shape();
    let min_dim = m.min(n);
    let svd = nalgebra::SVD::try_new(to_na(x), true, true, f64::EPSILON, svd_iteration_budget(min_dim))
        .ok_or(Error::SvdNonConvergence)?;
    let u = svd.u.expect("U requested");
    let vt = svd.v_t.expect("V^T requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > threshold)
        .collect();
    if kept.is_empty() {
        return Ok(empty_factors(m, n));
    }

    let k = kept.len();
    let left = DenseMatrix::from_fn(m, k, |r, c| u[(r, kept[c])]);
    let right = DenseMatrix::from_fn(n, k, |r, c| vt[(kept[c], r)]);
    let singular_values = kept.iter().map(|&i| svd.singular_values[i]).collect();
    Ok(SvdFactors {
        left,
        singular_values,
        right,
    })
}

// ---------------------------------------------------------------------------
// Lanczos bidiagonalization path
// ---------------------------------------------------------------------------

/// Deterministic pseudo-random unit start vector (SplitMix64 fill).
fn start_vector(n: usize, salt: u64) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ salt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let mut v: Vec<f64> = (0..n)
        .map(|_| (next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) - 0.5)
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    // Two passes of classical Gram-Schmidt keep the basis orthonormal to
    // working precision.
    for _ in 0..2 {
        for b in basis {
            let c: f64 = v.iter().zip(b).map(|(&a, &x)| a * x).sum();
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
    }
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One Golub-Kahan-Lanczos factorization of the deflated operator
/// `A - sum_i s_i u_i v_i^T`.
struct GklFactorization<'a> {
    a: &'a DenseMatrix,
    deflated: &'a [(f64, Vec<f64>, Vec<f64>)],
    u_cols: Vec<Vec<f64>>,
    v_cols: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Set once the recurrence hits an (exactly) invariant subspace.
    broke_down: bool,
}

impl<'a> GklFactorization<'a> {
    fn new(
        a: &'a DenseMatrix,
        deflated: &'a [(f64, Vec<f64>, Vec<f64>)],
        salt: u64,
    ) -> Option<Self> {
        let n = a.cols();
        let mut v1 = start_vector(n, salt);
        let deflated_v: Vec<Vec<f64>> = deflated.iter().map(|(_, _, v)| v.clone()).collect();
        orthogonalize(&mut v1, &deflated_v);
        let norm = vec_norm(&v1);
        if norm < 1e-8 {
            return None; // right space exhausted
        }
        for x in &mut v1 {
            *x /= norm;
        }
        Some(Self {
            a,
            deflated,
            u_cols: Vec::new(),
            v_cols: vec![v1],
            alpha: Vec::new(),
            beta: Vec::new(),
            broke_down: false,
        })
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.a.mul_vec(x, out);
        for (s, u, v) in self.deflated {
            let c: f64 = v.iter().zip(x).map(|(&a, &b)| a * b).sum();
            let sc = s * c;
            for (o, &ui) in out.iter_mut().zip(u) {
                *o -= sc * ui;
            }
        }
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        self.a.mul_vec_transpose(x, out);
        for (s, u, v) in self.deflated {
            let c: f64 = u.iter().zip(x).map(|(&a, &b)| a * b).sum();
            let sc = s * c;
            for (o, &vi) in out.iter_mut().zip(v) {
                *o -= sc * vi;
            }
        }
    }

    fn steps(&self) -> usize {
        self.alpha.len()
    }

    /// Extends the factorization to `target` steps or until breakdown.
    fn extend(&mut self, target: usize, scale_hint: f64) {
        let (m, n) = self.a.shape();
        let breakdown_tol = 1e-13 * scale_hint.max(f64::MIN_POSITIVE);
        let deflated_u: Vec<Vec<f64>> = self.deflated.iter().map(|(_, u, _)| u.clone()).collect();
        let deflated_v: Vec<Vec<f64>> = self.deflated.iter().map(|(_, _, v)| v.clone()).collect();

        while self.steps() < target && !self.broke_down {
            let j = self.steps();
            // u_{j+1} from A v_{j+1}
            let mut p = vec![0.0; m];
            self.apply(&self.v_cols[j], &mut p);
            if j > 0 {
                let b = self.beta[j - 1];
                for (pi, &ui) in p.iter_mut().zip(&self.u_cols[j - 1]) {
                    *pi -= b * ui;
                }
            }
            orthogonalize(&mut p, &self.u_cols);
            orthogonalize(&mut p, &deflated_u);
            let a_next = vec_norm(&p);
            if a_next <= breakdown_tol {
                // A v_j lies in span(U_j): the pair (V_{j+1}, U_j) is exactly
                // invariant with a j-by-(j+1) bidiagonal block.
                self.broke_down = true;
                return;
            }
            for x in &mut p {
                *x /= a_next;
            }
            self.alpha.push(a_next);
            self.u_cols.push(p);

            // v_{j+2} from A^T u_{j+1}
            let mut r = vec![0.0; n];
            self.apply_transpose(&self.u_cols[j], &mut r);
            let aj = self.alpha[j];
            for (ri, &vi) in r.iter_mut().zip(&self.v_cols[j]) {
                *ri -= aj * vi;
            }
            orthogonalize(&mut r, &self.v_cols);
            orthogonalize(&mut r, &deflated_v);
            let b_next = vec_norm(&r);
            if b_next <= breakdown_tol {
                self.broke_down = true;
                return;
            }
            for x in &mut r {
                *x /= b_next;
            }
            self.beta.push(b_next);
            self.v_cols.push(r);
        }
    }

    /// Ritz triplets with residual estimates `|beta_k * P[k-1, i]|`.
    ///
    /// After an alpha-phase breakdown the projected block is k-by-(k+1); its
    /// SVD still yields exact triplets because both Lanczos relations close.
    fn ritz(&self) -> Result<Vec<(f64, Vec<f64>, Vec<f64>, f64)>> {
        let k = self.steps();
        if k == 0 {
            return Ok(Vec::new());
        }
        let rect = self.broke_down && self.v_cols.len() == k + 1;
        let bcols = if rect { k + 1 } else { k };
        let mut b = nalgebra::DMatrix::zeros(k, bcols);
        for i in 0..k {
            b[(i, i)] = self.alpha[i];
            if i + 1 < bcols && i < self.beta.len() {
                b[(i, i + 1)] = self.beta[i];
            }
        }
        let svd = nalgebra::SVD::try_new(b, true, true, f64::EPSILON, svd_iteration_budget(k))
            .ok_or(Error::SvdNonConvergence)?;
        let p = svd.u.expect("U requested");
        let qt = svd.v_t.expect("V^T requested");
        let tail_beta = if self.broke_down {
            0.0
        } else {
            self.beta[k - 1]
        };

        let nvals = svd.singular_values.len();
        let mut order: Vec<usize> = (0..nvals).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].partial_cmp(&svd.singular_values[x]).unwrap());

        let (m, n) = self.a.shape();
        let mut out = Vec::with_capacity(nvals);
        for &i in &order {
            let sigma = svd.singular_values[i];
            let mut u = vec![0.0; m];
            let mut v = vec![0.0; n];
            for (jrow, ucol) in self.u_cols.iter().enumerate() {
                let pu = p[(jrow, i)];
                for (z, &c) in u.iter_mut().zip(ucol) {
                    *z += pu * c;
                }
            }
            for (jcol, vcol) in self.v_cols.iter().take(bcols).enumerate() {
                let qv = qt[(i, jcol)];
                for (z, &c) in v.iter_mut().zip(vcol) {
                    *z += qv * c;
                }
            }
            let residual = (tail_beta * p[(k - 1, i)]).abs();
            out.push((sigma, u, v, residual));
        }
        Ok(out)
    }
}

/// Lanczos-based top-`k` triplets (used for spectral-norm estimates when the
/// threshold filter would return nothing).
fn lanczos_top(x: &DenseMatrix, want: usize) -> Result<SvdFactors> {
    let collected =
        lanczos_collect(x, |converged: &[(f64, Vec<f64>, Vec<f64>)]| converged.len() >= want)?;
    let mut fac = factors_from_triplets(x, collected, 0.0);
    if fac.rank() > want {
        fac = SvdFactors {
            left: DenseMatrix::from_fn(x.rows(), want, |r, c| fac.left.get(r, c)),
            singular_values: fac.singular_values[..want].to_vec(),
            right: DenseMatrix::from_fn(x.cols(), want, |r, c| fac.right.get(r, c)),
        };
    }
    Ok(fac)
}

fn lanczos_partial_svd(x: &DenseMatrix, threshold: f64) -> Result<SvdFactors> {
    let collected = lanczos_collect(x, |converged| {
        converged
            .last()
            .map(|(s, _, _)| *s <= threshold)
            .unwrap_or(false)
    })?;
    Ok(factors_from_triplets(x, collected, threshold))
}

/// Runs GKL with subspace doubling (and deflation restarts on breakdown)
/// until `done(converged)` is satisfied or the space is exhausted.
fn lanczos_collect(
    x: &DenseMatrix,
    done: impl Fn(&[(f64, Vec<f64>, Vec<f64>)]) -> bool,
) -> Result<Vec<(f64, Vec<f64>, Vec<f64>)>> {
    let min_dim = x.rows().min(x.cols());
    let scale_hint = x.frobenius_norm();
    let mut collected: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut restarts = 0u64;

    'restart: while collected.len() < min_dim {
        let remaining = min_dim - collected.len();
        let mut fac = match GklFactorization::new(x, &collected, restarts) {
            Some(f) => f,
            None => break 'restart,
        };
        let mut target = 10.min(remaining);
        loop {
            fac.extend(target, scale_hint);
            // Once the nominal dimension is reached, keep stepping until the
            // recurrence breaks down; breakdown certifies the block as exact.
            while !fac.broke_down && fac.steps() >= remaining {
                let next = fac.steps() + 1;
                fac.extend(next, scale_hint);
                if fac.steps() < next && !fac.broke_down {
                    return Err(Error::SvdNonConvergence);
                }
            }
            let ritz = fac.ritz()?;
            if fac.broke_down {
                // Invariant subspace: every Ritz pair is exact.
                let made_progress = !ritz.is_empty();
                for (s, u, v, _) in ritz {
                    collected.push((s, u, v));
                }
                collected.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                if done(&collected) || !made_progress {
                    break 'restart;
                }
                restarts += 1;
                continue 'restart;
            }
            let smax = ritz
                .first()
                .map(|r| r.0)
                .unwrap_or(0.0)
                .max(scale_hint * f64::MIN_POSITIVE);
            let converged: Vec<_> = ritz
                .into_iter()
                .filter(|(_, _, _, res)| *res <= LANCZOS_REL_TOL * smax)
                .collect();
            let mut candidate = collected.clone();
            for (s, u, v, _) in &converged {
                candidate.push((*s, u.clone(), v.clone()));
            }
            candidate.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            if done(&candidate) {
                return Ok(candidate);
            }
            target = (target * 2).min(remaining);
        }
    }
    Ok(collected)
}

fn factors_from_triplets(
    x: &DenseMatrix,
    triplets: Vec<(f64, Vec<f64>, Vec<f64>)>,
    threshold: f64,
) -> SvdFactors {
    let (m, n) = x.shape();
    let kept: Vec<_> = triplets.into_iter().filter(|(s, _, _)| *s > threshold).collect();
    if kept.is_empty() {
        return empty_factors(m, n);
    }
    let k = kept.len();
    let left = DenseMatrix::from_fn(m, k, |r, c| kept[c].1[r]);
    let right = DenseMatrix::from_fn(n, k, |r, c| kept[c].2[r]);
    let singular_values = kept.iter().map(|(s, _, _)| *s).collect();
    SvdFactors {
        left,
        singular_values,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(m: usize, n: usize, seed: u64) -> DenseMatrix {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        DenseMatrix::from_fn(m, n, |_, _| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn diagonal_matrix_thresholded() {
        let x = DenseMatrix::from_diagonal(&[3.0, 1.0, 0.2]);
        let fac = partial_svd(&x, 0.5).unwrap();
        assert_eq!(fac.singular_values, vec![3.0, 1.0]);
        // axis-aligned singular vectors
        for (c, expected_axis) in [(0usize, 0usize), (1, 1)] {
            let col: Vec<f64> = (0..3).map(|r| fac.left.get(r, c)).collect();
            for (r, &v) in col.iter().enumerate() {
                if r == expected_axis {
                    assert!((v.abs() - 1.0).abs() < 1e-12);
                } else {
                    assert!(v.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn threshold_above_spectrum_gives_empty_factors() {
        let x = pseudo_random(8, 5, 3);
        let top = spectral_norm(&x).unwrap();
        let fac = partial_svd(&x, top * 1.000001).unwrap();
        assert!(fac.is_empty());
        assert_eq!(fac.reconstruct().frobenius_norm(), 0.0);
    }

    #[test]
    fn zero_threshold_matches_dense_reconstruction() {
        let x = pseudo_random(20, 15, 7);
        let fac = partial_svd(&x, 0.0).unwrap();
        assert_eq!(fac.rank(), 15);
        let err = fac.reconstruct().sub(&x).frobenius_norm();
        assert!(err <= 1e-10 * x.frobenius_norm(), "reconstruction error {err}");
        assert!(fac.orthonormality_residual() <= 1e-10);
        let desc = fac
            .singular_values
            .windows(2)
            .all(|w| w[0] >= w[1]);
        assert!(desc);
    }

    #[test]
    fn negative_threshold_is_rejected() {
        let x = pseudo_random(3, 3, 1);
        assert!(partial_svd(&x, -1.0).is_err());
    }

    #[test]
    fn lanczos_matches_dense_oracle_above_threshold() {
        // Small shapes route to the dense path in partial_svd, so exercise
        // the Lanczos code directly against the dense oracle.
        let x = pseudo_random(40, 30, 11);
        let dense = dense_partial_svd(&x, 0.0).unwrap();
        let threshold = dense.singular_values[8] * 1.0001; // keep top 8ish
        let lz = lanczos_partial_svd(&x, threshold).unwrap();
        let expect: Vec<f64> = dense
            .singular_values
            .iter()
            .copied()
            .filter(|&s| s > threshold)
            .collect();
        assert_eq!(lz.rank(), expect.len());
        for (a, b) in lz.singular_values.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-9 * dense.singular_values[0], "{a} vs {b}");
        }
        // subspace agreement via reconstruction
        let dense_top = {
            let kept = expect.len();
            let left = DenseMatrix::from_fn(40, kept, |r, c| dense.left.get(r, c));
            let right = DenseMatrix::from_fn(30, kept, |r, c| dense.right.get(r, c));
            SvdFactors {
                left,
                singular_values: expect,
                right,
            }
        };
        let diff = lz.reconstruct().sub(&dense_top.reconstruct()).frobenius_norm();
        assert!(diff <= 1e-8 * dense.singular_values[0], "subspace diff {diff}");
    }

    #[test]
    fn lanczos_handles_exactly_low_rank_input() {
        // rank-3 40x35 matrix: the recurrence breaks down and must still
        // return the three exact triplets.
        let u = pseudo_random(40, 3, 21);
        let v = pseudo_random(35, 3, 22);
        let x = u.matmul(&v.transpose());
        let lz = lanczos_partial_svd(&x, 1e-8).unwrap();
        assert_eq!(lz.rank(), 3);
        let err = lz.reconstruct().sub(&x).frobenius_norm();
        assert!(err <= 1e-9 * x.frobenius_norm(), "err {err}");
    }

    #[test]
    fn norms_of_diagonal_and_zero() {
        let x = DenseMatrix::from_diagonal(&[3.0, 4.0]);
        let n = norms(&x, None).unwrap();
        assert!((n.frobenius - 5.0).abs() < 1e-12);
        assert!((n.spectral - 4.0).abs() < 1e-12);
        assert!((n.nuclear - 7.0).abs() < 1e-12);
        assert!((n.l1 - 7.0).abs() < 1e-12);
        assert!((n.linf - 4.0).abs() < 1e-12);

        let z = DenseMatrix::zeros(3, 2);
        let nz = norms(&z, None).unwrap();
        assert_eq!(nz.frobenius, 0.0);
        assert_eq!(nz.spectral, 0.0);
        assert_eq!(nz.nuclear, 0.0);
        assert_eq!(nz.l1, 0.0);
        assert_eq!(nz.linf, 0.0);
    }

    #[test]
    fn masked_l1_sums_only_observed_entries() {
        let x = DenseMatrix::from_vec(2, 2, vec![1.0, -2.0, 3.0, -4.0]).unwrap();
        let mask = ObservationMask::from_indices(2, 2, vec![(0, 1), (1, 0)]).unwrap();
        let n = norms(&x, Some(&mask)).unwrap();
        assert_eq!(n.l1_masked, Some(5.0));
        assert_eq!(n.l1, 10.0);
    }
}
