//! Dense matrices over an exact [`Field`], row reduction and seeded sampling.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::scalar::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|row| row.iter().map(|&v| F::from_i64(v)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Reduces to reduced row echelon form and returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].inv().expect("nonzero pivot");
            for c in col..self.cols {
                let v = self[(row, c)].clone();
                if !v.is_zero() {
                    self[(row, c)] = v * inv.clone();
                }
            }
            let pivot_row: Vec<(usize, F)> = (col..self.cols)
                .filter(|&c| !self[(row, c)].is_zero())
                .map(|c| (c, self[(row, c)].clone()))
                .collect();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, v) in &pivot_row {
                    let cur = std::mem::replace(&mut self[(r, *c)], F::zero());
                    self[(r, *c)] = cur - factor.clone() * v.clone();
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.entries[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.entries[r * self.cols + c]
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|c| self.entries[r * self.cols + c].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`solve_linear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution<F> {
    /// A solution of `M x = rhs` when a right-hand side was given and the
    /// system is consistent.
    pub particular: Option<Vec<F>>,
    /// False only when a right-hand side was given and no solution exists.
    pub consistent: bool,
    pub nullspace_basis: Vec<Vec<F>>,
    pub rank: usize,
}

/// Solves `M x = rhs` exactly and returns a basis of `ker M`.
pub fn solve_linear<F: Field>(m: &Matrix<F>, rhs: Option<&[F]>) -> LinearSolution<F> {
    let cols = m.cols();
    let augmented = match rhs {
        Some(b) => {
            assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
            let mut a = Matrix::zeros(m.rows(), cols + 1);
            for r in 0..m.rows() {
                for c in 0..cols {
                    a[(r, c)] = m[(r, c)].clone();
                }
                a[(r, cols)] = b[r].clone();
            }
            a
        }
        None => m.clone(),
    };
    let mut red = augmented;
    let all_pivots = red.rref_in_place();
    let pivots: Vec<usize> = all_pivots.iter().copied().filter(|&c| c < cols).collect();
    let rank = pivots.len();
    let consistent = all_pivots.len() == pivots.len();

    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let nullspace_basis = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                let e = &red[(row, free)];
                if !e.is_zero() {
                    v[p] = -e.clone();
                }
            }
            v
        })
        .collect();

    let particular = match rhs {
        Some(_) if consistent => {
            let mut x = vec![F::zero(); cols];
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = red[(row, cols)].clone();
            }
            Some(x)
        }
        _ => None,
    };
    LinearSolution { particular, consistent, nullspace_basis, rank }
}

/// Deterministic vector of `dims` samples from SplitMix64 seeded with `seed`.
///
/// SplitMix64 is the reference generator (state += 0x9e3779b97f4a7c15 and
/// the standard 64-bit finalizer). Rational entries are
/// `next_u64() mod 20001 - 10000`; prime-field entries are `next_u64() mod p`.
pub fn seeded_random_vector<F: Field>(seed: u64, dims: usize) -> Vec<F> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..dims).map(|_| F::sample(&mut rng)).collect()
}

/// Derives an independent seed for a sub-task, so parallel work never shares a stream.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    use rand_core::Rng;
    let mut rng = SplitMix64::seed_from_u64(seed ^ index.wrapping_mul(0xa076_1d64_78bd_642f));
    rng.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, F32003};
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn identity_system() {
        let m = Matrix::<Q>::identity(3);
        let rhs = [q(1), q(2), q(3)];
        let s = solve_linear(&m, Some(&rhs));
        assert_eq!(s.particular, Some(rhs.to_vec()));
        assert!(s.nullspace_basis.is_empty());
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn zero_map() {
        let s = solve_linear(&Matrix::<Q>::zeros(2, 2), None);
        assert_eq!(s.rank, 0);
        assert_eq!(s.nullspace_basis.len(), 2);
    }

    #[test]
    fn rank_one_kernel() {
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let s = solve_linear(&m, None);
        assert_eq!(s.rank, 1);
        assert_eq!(s.nullspace_basis, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn inconsistent_system() {
        let m = Matrix::<Q>::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let s = solve_linear(&m, Some(&[q(1), q(2)]));
        assert!(!s.consistent);
        assert_eq!(s.particular, None);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn random_vectors() {
        assert!(seeded_random_vector::<Q>(42, 0).is_empty());
        let a = seeded_random_vector::<Q>(42, 5);
        assert_eq!(a, seeded_random_vector::<Q>(42, 5));
        assert_ne!(a, seeded_random_vector::<Q>(43, 5));
        let p = seeded_random_vector::<F32003>(42, 5);
        assert_eq!(p, seeded_random_vector::<F32003>(42, 5));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    fn to_q(rows: &[Vec<i64>]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    proptest! {
        #[test]
        fn solution_substitutes_back(rows in small_matrix(), seed in 0u64..1000) {
            let m = to_q(&rows);
            let rhs = seeded_random_vector::<Q>(seed, m.rows());
            let s = solve_linear(&m, Some(&rhs));
            if let Some(x) = &s.particular {
                prop_assert_eq!(m.mul_vec(x), rhs);
            }
            for v in &s.nullspace_basis {
                prop_assert!(m.mul_vec(v).iter().all(|e| e.is_zero()));
            }
            prop_assert_eq!(s.rank + s.nullspace_basis.len(), m.cols());
        }

        #[test]
        fn rank_invariant_under_row_permutation(rows in small_matrix(), rot in 0usize..6) {
            let m = to_q(&rows);
            let mut permuted = rows.clone();
            let k = rot % permuted.len();
            permuted.rotate_left(k);
            permuted.reverse();
            prop_assert_eq!(m.rank(), to_q(&permuted).rank());
        }
    }
}
