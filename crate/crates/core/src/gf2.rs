//! Dense matrices over GF(2) with row reduction and affine-system solving.

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A `rows x cols` matrix over GF(2), one [`BitVec`] per row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bf2Matrix {
    cols: usize,
    data: Vec<BitVec>,
}

/// Output of [`Bf2Matrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Reduced row-echelon form; zero rows sit at the bottom.
    pub reduced: Bf2Matrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows, strictly increasing.
    pub pivot_cols: Vec<usize>,
}

/// Full solution set of a consistent system `A x = b`: every solution is
/// `particular` XOR a combination of `kernel_basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    /// The solution with all free variables set to zero.
    pub particular: BitVec,
    /// One vector per free column, ordered by that column.
    pub kernel_basis: Vec<BitVec>,
}

impl Bf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, data: rows })
    }

    /// Builds a matrix from `u64` row masks (at most 64 columns).
    pub fn from_u64_rows(cols: usize, rows: &[u64]) -> Self {
        Self {
            cols,
            data: rows.iter().map(|&r| BitVec::from_u64(cols, r)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<(), Gf2Error> {
        if row.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.data.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows());
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(BitVec::from_bools(self.data.iter().map(|row| row.dot(x))))
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Gauss-Jordan elimination to reduced row-echelon form.
    pub fn row_reduce(&self) -> Echelon {
        let mut m = self.clone();
        let pivot_cols = m.reduce_in_place(self.cols);
        Echelon {
            rank: pivot_cols.len(),
            reduced: m,
            pivot_cols,
        }
    }

    /// Reduces in place, choosing pivots only among the first `pivot_limit`
    /// columns. Returns the pivot columns.
    fn reduce_in_place(&mut self, pivot_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..pivot_limit {
            if next_row == self.data.len() {
                break;
            }
            let Some(found) = (next_row..self.data.len()).find(|&r| self.data[r].get(col)) else {
                continue;
            };
            self.data.swap(next_row, found);
            let pivot_row = self.data[next_row].clone();
            for (r, row) in self.data.iter_mut().enumerate() {
                if r != next_row && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        pivots
    }

    /// Solves `A x = rhs`. Returns `Ok(None)` when the system is inconsistent,
    /// i.e. when `rank(A) < rank(A | rhs)`.
    pub fn solve_affine(&self, rhs: &BitVec) -> Result<Option<AffineSolution>, Gf2Error> {
        if rhs.len() != self.rows() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows(),
                found: rhs.len(),
            });
        }
        let cols = self.cols;
        // Augmented matrix with the right-hand side in column `cols`.
        let mut aug = Bf2Matrix::zeros(0, cols + 1);
        for (r, row) in self.data.iter().enumerate() {
            let mut wide = BitVec::zeros(cols + 1);
            for c in row.iter_ones() {
                wide.set(c, true);
            }
            wide.set(cols, rhs.get(r));
            aug.data.push(wide);
        }
        let pivots = aug.reduce_in_place(cols);
        let rank = pivots.len();
        if aug.data[rank..].iter().any(|row| row.get(cols)) {
            return Ok(None);
        }

        let mut particular = BitVec::zeros(cols);
        for (i, &p) in pivots.iter().enumerate() {
            particular.set(p, aug.data[i].get(cols));
        }

        let mut is_pivot = vec![false; cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let kernel_basis = (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(cols);
                v.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if aug.data[i].get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();

        Ok(Some(AffineSolution {
            particular,
            kernel_basis,
        }))
    }
}

impl AffineSolution {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Total number of solutions, `2^kernel_dim`, or `None` on overflow.
    pub fn solution_count(&self) -> Option<u128> {
        1u128.checked_shl(self.kernel_dim() as u32)
    }

    /// Up to `limit` distinct solutions in binary-reflected Gray-code order of
    /// the combination mask: the first is `particular`, and each subsequent
    /// one differs from its predecessor by a single basis vector.
    pub fn enumerate(&self, limit: usize) -> Vec<BitVec> {
        let total = self.solution_count().unwrap_or(u128::MAX);
        let take = (limit as u128).min(total) as usize;
        let mut out = Vec::with_capacity(take);
        if take == 0 {
            return out;
        }
        let mut current = self.particular.clone();
        out.push(current.clone());
        for step in 1..take {
            // Gray code g(step) differs from g(step - 1) in bit trailing_zeros(step).
            current.xor_assign(&self.kernel_basis[step.trailing_zeros() as usize]);
            out.push(current.clone());
        }
        out
    }
}
