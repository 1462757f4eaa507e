//! Pauli decomposition of square matrices of dimension `2^n`.
//!
//! Two independent routes are provided. [`decompose_trace`] evaluates
//! `Tr(P^dagger M) / 2^n` for every one of the `4^n` strings and is kept as
//! the reference. [`decompose_tensorized`] splits the matrix into quadrants on
//! the most-significant qubit,
//!
//! ```text
//! M = [[A, B], [C, D]]  =>  I: (A + D)/2   X: (B + C)/2   Y: i(B - C)/2   Z: (A - D)/2
//! ```
//!
//! and recurses on the four half-size blocks. Blocks are stored sparsely and
//! empty blocks are skipped, so banded operators at `n = 14` stay cheap. The
//! dense worst case holds `O(4^n)` coefficients across the recursion.

use num_complex::Complex64;

use super::{PauliSum, PauliTerm, DEFAULT_RELATIVE_TOLERANCE};
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// Largest register accepted by [`decompose_trace`].
pub const TRACE_DECOMPOSITION_QUBIT_CAP: usize = 8;

/// Intermediate blocks drop entries below this fraction of `max |M|`.
const INTERMEDIATE_RELATIVE_CUT: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Reference decomposition that checks all `4^n` strings.
pub fn decompose_trace(m: &SparseOperator) -> Result<PauliSum> {
    decompose_trace_with(m, TRACE_DECOMPOSITION_QUBIT_CAP, DEFAULT_RELATIVE_TOLERANCE)
}

pub fn decompose_trace_with(
    m: &SparseOperator,
    qubit_cap: usize,
    relative_tol: f64,
) -> Result<PauliSum> {
    let n = m.n_qubits()?;
    if n > qubit_cap {
        return Err(Error::CapExceeded {
            what: "trace decomposition qubits",
            limit: qubit_cap,
            got: n,
        });
    }
    let dim = 1usize << n;
    // Bucket nonzero entries by the X mask they can contribute to.
    let mut by_x: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
    for &(r, c, v) in m.entries() {
        by_x[r ^ c].push((c, v));
    }
    let norm = 1.0 / dim as f64;
    let mut terms = Vec::new();
    for (x, bucket) in by_x.iter().enumerate() {
        for z in 0..dim {
            let probe = PauliTerm::new(n, x as u64, z as u64, Complex64::new(1.0, 0.0))?;
            let mut acc = ZERO;
            for &(c, v) in bucket {
                let (_, phase) = probe.act_on_basis(c);
                acc += phase.conj() * v;
            }
            if acc != ZERO {
                terms.push(probe.with_coefficient(acc * norm));
            }
        }
    }
    PauliSum::from_terms_with_tolerance(n, terms, relative_tol)
}

/// Recursive quadrant decomposition with the default pruning tolerance.
pub fn decompose_tensorized(m: &SparseOperator) -> Result<PauliSum> {
    decompose_tensorized_with(m, DEFAULT_RELATIVE_TOLERANCE)
}

pub fn decompose_tensorized_with(m: &SparseOperator, relative_tol: f64) -> Result<PauliSum> {
    let n = m.n_qubits()?;
    if n > 32 {
        return Err(Error::CapExceeded {
            what: "tensorized decomposition qubits",
            limit: 32,
            got: n,
        });
    }
    let cut = INTERMEDIATE_RELATIVE_CUT * m.max_abs();
    let root: Vec<Entry> = m
        .entries()
        .iter()
        .map(|&(r, c, v)| (r as u32, c as u32, v))
        .collect();
    let mut terms = Vec::new();
    let mut walker = Walker {
        n_qubits: n,
        cut,
        out: &mut terms,
    };
    walker.visit(root, 1usize << n, 0, 0)?;
    PauliSum::from_terms_with_tolerance(n, terms, relative_tol)
}

/// Sum of the weighted string matrices.
pub fn reconstruct(sum: &PauliSum) -> SparseOperator {
    let dim = 1usize << sum.n_qubits();
    let mut triplets = Vec::with_capacity(sum.len() * dim);
    for t in sum.terms() {
        for col in 0..dim {
            let (row, phase) = t.act_on_basis(col);
            triplets.push((row, col, phase * t.coefficient()));
        }
    }
    SparseOperator::from_triplets(dim, triplets).expect("string images stay in range")
}

type Entry = (u32, u32, Complex64);

struct Walker<'a> {
    n_qubits: usize,
    cut: f64,
    out: &'a mut Vec<PauliTerm>,
}

impl Walker<'_> {
    fn visit(&mut self, block: Vec<Entry>, dim: usize, x: u64, z: u64) -> Result<()> {
        if block.is_empty() {
            return Ok(());
        }
        if dim == 1 {
            let v = block[0].2;
            self.out.push(PauliTerm::new(self.n_qubits, x, z, v)?);
            return Ok(());
        }
        let half = (dim / 2) as u32;
        let bit = 1u64 << (dim.trailing_zeros() - 1);
        let mut quads: [Vec<Entry>; 4] = Default::default();
        for (r, c, v) in block {
            let q = usize::from(r >= half) * 2 + usize::from(c >= half);
            quads[q].push((r % half, c % half, v));
        }
        let [a, b, c, d] = quads;
        let half_c = Complex64::new(0.5, 0.0);
        let i_half = Complex64::new(0.0, 0.5);
        let sub = dim / 2;
        self.visit(combine(&a, &d, half_c, half_c, self.cut), sub, x, z)?;
        self.visit(combine(&b, &c, half_c, half_c, self.cut), sub, x | bit, z)?;
        self.visit(
            combine(&b, &c, i_half, -i_half, self.cut),
            sub,
            x | bit,
            z | bit,
        )?;
        self.visit(combine(&a, &d, half_c, -half_c, self.cut), sub, x, z | bit)?;
        Ok(())
    }
}

/// `alpha * p + beta * q` for sorted sparse blocks.
fn combine(p: &[Entry], q: &[Entry], alpha: Complex64, beta: Complex64, cut: f64) -> Vec<Entry> {
    let mut out = Vec::with_capacity(p.len().max(q.len()));
    let (mut i, mut j) = (0, 0);
    let mut push = |r: u32, c: u32, v: Complex64| {
        if v != ZERO && v.norm() > cut {
            out.push((r, c, v));
        }
    };
    while i < p.len() || j < q.len() {
        let kp = p.get(i).map(|e| (e.0, e.1));
        let kq = q.get(j).map(|e| (e.0, e.1));
        match (kp, kq) {
            (Some(a), Some(b)) if a == b => {
                push(a.0, a.1, alpha * p[i].2 + beta * q[j].2);
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                push(a.0, a.1, alpha * p[i].2);
                i += 1;
            }
            (Some(a), None) => {
                push(a.0, a.1, alpha * p[i].2);
                i += 1;
            }
            (_, Some(b)) => {
                push(b.0, b.1, beta * q[j].2);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn sigma_x_is_a_single_string() {
        let x = SparseOperator::from_triplets(2, vec![(0, 1, r(1.0)), (1, 0, r(1.0))]).unwrap();
        for sum in [
            decompose_trace(&x).unwrap(),
            decompose_tensorized(&x).unwrap(),
        ] {
            assert_eq!(sum.len(), 1);
            assert_eq!(sum.coefficient_of("X").unwrap(), r(1.0));
        }
    }

    #[test]
    fn identity_on_three_qubits() {
        let id = SparseOperator::identity(8);
        for sum in [
            decompose_trace(&id).unwrap(),
            decompose_tensorized(&id).unwrap(),
        ] {
            assert_eq!(sum.len(), 1);
            assert_eq!(sum.coefficient_of("III").unwrap(), r(1.0));
        }
    }

    #[test]
    fn zero_matrix_has_no_strings() {
        let z = SparseOperator::zeros(4);
        assert_eq!(decompose_trace(&z).unwrap().count_strings(0.0), 0);
        assert_eq!(decompose_tensorized(&z).unwrap().count_strings(0.0), 0);
        assert_eq!(reconstruct(&PauliSum::zero(2)), SparseOperator::zeros(4));
    }

    #[test]
    fn non_power_of_two_is_rejected() {
        let m = SparseOperator::identity(3);
        assert_eq!(decompose_trace(&m), Err(Error::NotPowerOfTwo(3)));
        assert_eq!(decompose_tensorized(&m), Err(Error::NotPowerOfTwo(3)));
    }

    #[test]
    fn trace_route_enforces_cap() {
        let m = SparseOperator::identity(1 << 9);
        assert!(matches!(
            decompose_trace(&m),
            Err(Error::CapExceeded { .. })
        ));
        assert!(decompose_tensorized(&m).is_ok());
    }

    #[test]
    fn reconstruct_single_x() {
        let sum = PauliSum::single(PauliTerm::from_label("X", r(1.0)).unwrap());
        let m = reconstruct(&sum);
        assert_eq!(m.get(0, 1), r(1.0));
        assert_eq!(m.get(1, 0), r(1.0));
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn non_hermitian_input_keeps_complex_coefficients() {
        // |0><1| = (X + iY)/2
        let m = SparseOperator::from_triplets(2, vec![(0, 1, r(1.0))]).unwrap();
        let sum = decompose_tensorized(&m).unwrap();
        assert_eq!(sum.coefficient_of("X").unwrap(), r(0.5));
        assert_eq!(sum.coefficient_of("Y").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(sum, decompose_trace(&m).unwrap());
    }
}
