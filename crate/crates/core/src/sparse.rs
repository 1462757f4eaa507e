//! Coordinate-list complex matrices.
//!
//! Entries are kept sorted by `(row, col)` with duplicates summed and
//! magnitudes at or below [`ENTRY_TOLERANCE`] dropped.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute magnitude below which matrix entries are pruned.
pub const ENTRY_TOLERANCE: f64 = 1e-14;

/// Tolerance on `max |M - M^dagger|` for certifying an operator as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone)]
pub struct SparseOperator {
    dimension: usize,
    entries: Vec<(usize, usize, Complex64)>,
    hermitian: bool,
}

/// Equality of matrices; the Hermitian certificate is ignored.
impl PartialEq for SparseOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.entries == other.entries
    }
}

impl SparseOperator {
    /// Builds an operator from unordered triplets; repeated positions are summed.
    pub fn from_triplets<I>(dimension: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= dimension || c >= dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: r.max(c) + 1,
                });
            }
            *acc.entry((r, c)).or_insert(ZERO) += v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| v.norm() > ENTRY_TOLERANCE)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        Ok(Self {
            dimension,
            entries,
            hermitian: false,
        })
    }

    /// Trusted constructor for entries that are already sorted, unique and in range.
    pub(crate) fn from_sorted_unchecked(
        dimension: usize,
        entries: Vec<(usize, usize, Complex64)>,
    ) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        let entries = entries
            .into_iter()
            .filter(|e| e.2.norm() > ENTRY_TOLERANCE)
            .collect();
        Self {
            dimension,
            entries,
            hermitian: false,
        }
    }

    pub fn zeros(dimension: usize) -> Self {
        Self {
            dimension,
            entries: Vec::new(),
            hermitian: true,
        }
    }

    pub fn identity(dimension: usize) -> Self {
        Self {
            dimension,
            entries: (0..dimension).map(|i| (i, i, ONE)).collect(),
            hermitian: true,
        }
    }

    pub fn diagonal<I: IntoIterator<Item = Complex64>>(values: I) -> Self {
        let values: Vec<Complex64> = values.into_iter().collect();
        let dimension = values.len();
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i, i, v))
            .collect();
        Self::from_sorted_unchecked(dimension, entries)
    }

    /// Converts a dense square matrix, pruning negligible entries.
    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut entries = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = m[(r, c)];
                if v.norm() > ENTRY_TOLERANCE {
                    entries.push((r, c, v));
                }
            }
        }
        Ok(Self::from_sorted_unchecked(n, entries))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn n_qubits(&self) -> Result<usize> {
        if self.dimension.is_power_of_two() {
            Ok(self.dimension.trailing_zeros() as usize)
        } else {
            Err(Error::NotPowerOfTwo(self.dimension))
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map(|i| self.entries[i].2)
            .unwrap_or(ZERO)
    }

    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        entries.sort_by_key(|a| (a.0, a.1));
        Self {
            dimension: self.dimension,
            entries,
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (r, c, v * factor))
            .collect();
        Self::from_sorted_unchecked(self.dimension, entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|e| (e.0, e.1));
            let kb = b.get(j).map(|e| (e.0, e.1));
            match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    out.push((x.0, x.1, a[i].2 + b[j].2));
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(a[i]);
                    i += 1;
                }
                (Some(_), None) => {
                    out.push(a[i]);
                    i += 1;
                }
                _ => {
                    out.push(b[j]);
                    j += 1;
                }
            }
        }
        Ok(Self::from_sorted_unchecked(self.dimension, out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let rows_of_other = other.row_ranges();
        let mut out = Vec::new();
        let mut row_acc: BTreeMap<usize, Complex64> = BTreeMap::new();
        let mut idx = 0;
        while idx < self.entries.len() {
            let row = self.entries[idx].0;
            row_acc.clear();
            while idx < self.entries.len() && self.entries[idx].0 == row {
                let (_, k, v) = self.entries[idx];
                let (lo, hi) = rows_of_other[k];
                for &(_, c, w) in &other.entries[lo..hi] {
                    *row_acc.entry(c).or_insert(ZERO) += v * w;
                }
                idx += 1;
            }
            out.extend(row_acc.iter().map(|(&c, &v)| (row, c, v)));
        }
        Ok(Self::from_sorted_unchecked(self.dimension, out))
    }

    /// Kronecker product `self ⊗ other`: `self` acts on the high-order index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dimension;
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &other.entries {
                entries.push((r1 * d + r2, c1 * d + c2, v1 * v2));
            }
        }
        entries.sort_by_key(|a| (a.0, a.1));
        Self::from_sorted_unchecked(self.dimension * d, entries)
    }

    /// Applies the operator to a dense vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: v.len(),
            });
        }
        let mut out = vec![ZERO; self.dimension];
        for &(r, c, w) in &self.entries {
            out[r] += w * v[c];
        }
        Ok(out)
    }

    /// Largest entrywise difference `max |self - other|`, without pruning.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut worst = 0.0f64;
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|e| (e.0, e.1));
            let kb = b.get(j).map(|e| (e.0, e.1));
            let d = match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                    (a[i - 1].2 - b[j - 1].2).norm()
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    a[i - 1].2.norm()
                }
                (Some(_), None) => {
                    i += 1;
                    a[i - 1].2.norm()
                }
                _ => {
                    j += 1;
                    b[j - 1].2.norm()
                }
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_error(&self) -> f64 {
        let adj = self.adjoint();
        self.max_abs_diff(&adj).unwrap_or(f64::INFINITY)
    }

    /// Verifies Hermiticity to `HERMITIAN_TOLERANCE · max(1, max|M|)` and sets the flag.
    pub fn certify_hermitian(mut self) -> Result<Self> {
        let err = self.hermitian_error();
        if err > HERMITIAN_TOLERANCE * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(err));
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn is_certified_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |M^dagger M - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has matching dimension");
        prod.max_abs_diff(&Self::identity(self.dimension))
            .expect("identity has matching dimension")
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        Ok(())
    }

    fn row_ranges(&self) -> Vec<(usize, usize)> {
        let mut ranges = vec![(0, 0); self.dimension];
        let mut start = 0;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let mut end = start;
            while end < self.entries.len() && self.entries[end].0 == row {
                end += 1;
            }
            ranges[row] = (start, end);
            start = end;
        }
        ranges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn duplicates_are_summed_and_zeros_pruned() {
        let m = SparseOperator::from_triplets(
            2,
            vec![
                (0, 1, c(1.0)),
                (0, 1, c(2.0)),
                (1, 0, c(1e-16)),
                (1, 1, c(1.0)),
                (1, 1, c(-1.0)),
            ],
        )
        .unwrap();
        assert_eq!(m.entries(), &[(0, 1, c(3.0))]);
    }

    #[test]
    fn out_of_range_triplet_is_rejected() {
        assert!(SparseOperator::from_triplets(2, vec![(2, 0, c(1.0))]).is_err());
    }

    #[test]
    fn matmul_matches_dense() {
        let a = SparseOperator::from_triplets(
            3,
            vec![
                (0, 1, c(2.0)),
                (1, 2, Complex64::new(0.0, 1.0)),
                (2, 0, c(-1.0)),
                (1, 1, c(3.0)),
            ],
        )
        .unwrap();
        let b = a.adjoint();
        let dense = a.to_dense() * b.to_dense();
        let sparse = a.matmul(&b).unwrap().to_dense();
        assert!((dense - sparse).iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn kron_puts_left_factor_on_high_bits() {
        let x = SparseOperator::from_triplets(2, vec![(0, 1, c(1.0)), (1, 0, c(1.0))]).unwrap();
        let id = SparseOperator::identity(2);
        let m = x.kron(&id);
        assert_eq!(m.get(0, 2), c(1.0));
        assert_eq!(m.get(1, 3), c(1.0));
        assert_eq!(m.get(0, 1), c(0.0));
    }

    #[test]
    fn hermitian_certification() {
        let ok = SparseOperator::from_triplets(
            2,
            vec![
                (0, 1, Complex64::new(0.0, -1.0)),
                (1, 0, Complex64::new(0.0, 1.0)),
            ],
        )
        .unwrap();
        assert!(ok.certify_hermitian().unwrap().is_certified_hermitian());
        let bad = SparseOperator::from_triplets(2, vec![(0, 1, c(1.0))]).unwrap();
        assert!(matches!(
            bad.certify_hermitian(),
            Err(Error::NotHermitian(_))
        ));
    }
}
