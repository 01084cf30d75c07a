//! Observation masks and the projection onto observed entries.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// The index set of observed entries of an m-by-n matrix.
///
/// A full mask (every entry observed) is stored without an index list so the
/// common full-observation case costs nothing. Partial masks keep a sorted,
/// duplicate-free list of `(row, col)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationMask {
    rows: usize,
    cols: usize,
    // None means full observation.
    indices: Option<Vec<(usize, usize)>>,
}

impl ObservationMask {
    /// Mask observing every entry.
    pub fn full(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        Self {
            rows,
            cols,
            indices: None,
        }
    }

    /// Mask from an explicit index list. Indices are sorted row-major and
    /// de-duplicated; out-of-range indices and empty masks are rejected.
    /// A list covering every entry collapses to the full-mask representation.
    pub fn from_indices(
        rows: usize,
        cols: usize,
        mut indices: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMask(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        for &(i, j) in &indices {
            if i >= rows || j >= cols {
                return Err(Error::InvalidMask(format!(
                    "index ({i}, {j}) out of range for {rows}x{cols}"
                )));
            }
        }
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::InvalidMask("mask must observe at least one entry".into()));
        }
        if indices.len() == rows * cols {
            return Ok(Self::full(rows, cols));
        }
        Ok(Self {
            rows,
            cols,
            indices: Some(indices),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.indices.is_none()
    }

    /// Number of observed entries.
    pub fn len(&self) -> usize {
        match &self.indices {
            None => self.rows * self.cols,
            Some(ix) => ix.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false // |Omega| >= 1 by construction
    }

    /// Sorted index list for partial masks; `None` for the full mask.
    pub fn indices(&self) -> Option<&[(usize, usize)]> {
        self.indices.as_deref()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        if i >= self.rows || j >= self.cols {
            return false;
        }
        match &self.indices {
            None => true,
            Some(ix) => ix.binary_search(&(i, j)).is_ok(),
        }
    }

    pub(crate) fn check_shape(&self, x: &DenseMatrix) -> Result<()> {
        if x.rows() == self.rows && x.cols() == self.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected_rows: self.rows,
                expected_cols: self.cols,
                rows: x.rows(),
                cols: x.cols(),
            })
        }
    }

    /// Calls `f(i, j)` for every observed entry, row-major order.
    pub fn for_each(&self, mut f: impl FnMut(usize, usize)) {
        match &self.indices {
            None => {
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        f(i, j);
                    }
                }
            }
            Some(ix) => {
                for &(i, j) in ix {
                    f(i, j);
                }
            }
        }
    }

    /// Observed values of `x`, row-major order over the mask.
    pub fn gather(&self, x: &DenseMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each(|i, j| out.push(x.get(i, j)));
        out
    }
}

/// Projection onto the observed entries: copies entries on the mask, zeroes
/// the rest. Linear, idempotent and self-adjoint.
pub fn project_mask(x: &DenseMatrix, mask: &ObservationMask) -> Result<DenseMatrix> {
    mask.check_shape(x)?;
    if mask.is_full() {
        return Ok(x.clone());
    }
    let mut out = DenseMatrix::zeros(x.rows(), x.cols());
    mask.for_each(|i, j| out.set(i, j, x.get(i, j)));
    Ok(out)
}

/// Projection onto the complement of the mask: `x - project_mask(x)`.
pub fn project_complement(x: &DenseMatrix, mask: &ObservationMask) -> Result<DenseMatrix> {
    mask.check_shape(x)?;
    if mask.is_full() {
        return Ok(DenseMatrix::zeros(x.rows(), x.cols()));
    }
    let mut out = x.clone();
    mask.for_each(|i, j| out.set(i, j, 0.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_mask_leaves_matrix_unchanged() {
        let x = DenseMatrix::from_vec(2, 2, vec![1.0, -2.0, 3.0, 4.0]).unwrap();
        let m = ObservationMask::full(2, 2);
        assert_eq!(project_mask(&x, &m).unwrap(), x);
        assert!(m.is_full());
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn covering_index_list_collapses_to_full() {
        let ix = vec![(1, 0), (0, 0), (0, 1), (1, 1), (0, 1)];
        let m = ObservationMask::from_indices(2, 2, ix).unwrap();
        assert!(m.is_full());
    }

    #[test]
    fn projection_is_idempotent() {
        let x = DenseMatrix::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let m = ObservationMask::from_indices(2, 3, vec![(0, 0), (1, 2)]).unwrap();
        let p = project_mask(&x, &m).unwrap();
        let pp = project_mask(&p, &m).unwrap();
        assert_eq!(p, pp);
        assert_eq!(p.get(0, 0), 1.0);
        assert_eq!(p.get(0, 1), 0.0);
        assert_eq!(p.get(1, 2), 6.0);
    }

    #[test]
    fn rejects_bad_masks() {
        assert!(ObservationMask::from_indices(2, 2, vec![(2, 0)]).is_err());
        assert!(ObservationMask::from_indices(2, 2, vec![]).is_err());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let x = DenseMatrix::zeros(3, 3);
        let m = ObservationMask::full(2, 3);
        assert!(project_mask(&x, &m).is_err());
    }

    #[test]
    fn complement_plus_projection_is_identity() {
        let x = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m = ObservationMask::from_indices(2, 2, vec![(0, 1), (1, 1)]).unwrap();
        let sum = project_mask(&x, &m)
            .unwrap()
            .add(&project_complement(&x, &m).unwrap());
        assert_eq!(sum, x);
    }
}
