//! Dense matrices over [`Scalar`] with Gaussian elimination.
//!
//! Elimination is exact when every entry is exact; otherwise the matrix is
//! demoted to floating point and pivots are selected by largest modulus with
//! a threshold relative to the largest entry of the original matrix.

use crate::scalar::Scalar;

/// Pivot threshold factor for rank computations in `Approx` mode, applied
/// relative to the largest entry magnitude of the matrix.
pub const RANK_PIVOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for idx in 0..n {
            m.set(idx, idx, Scalar::one());
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == width), "ragged rows");
        Matrix {
            rows: height,
            cols: width,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn all_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    /// Largest entry modulus (numeric, valid in both modes).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    let term = self.get(r, k) * rhs.get(k, c);
                    if !term.is_exactly_zero() {
                        acc = &acc + &term;
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    /// Row vector times matrix: `w * M`.
    pub fn row_vec_mul(w: &[Scalar], m: &Matrix) -> Vec<Scalar> {
        assert_eq!(w.len(), m.rows, "dimension mismatch in vector-matrix product");
        (0..m.cols)
            .map(|c| {
                let mut acc = Scalar::zero();
                for (k, wk) in w.iter().enumerate() {
                    if !wk.is_exactly_zero() {
                        acc = &acc + &(wk * m.get(k, c));
                    }
                }
                acc
            })
            .collect()
    }

    /// Row echelon form and rank.  `pivot_tol` is the relative pivot
    /// threshold used only in `Approx` mode (against the largest entry of
    /// `self`); exact matrices pivot on any exactly nonzero entry.
    pub fn echelon(&self, pivot_tol: f64) -> (Matrix, usize) {
        let mut m = self.clone();
        let exact = m.all_exact();
        let threshold = if exact {
            0.0
        } else {
            // Demote everything so elimination arithmetic stays uniform.
            for entry in &mut m.data {
                *entry = entry.to_approx();
            }
            pivot_tol * self.max_abs()
        };
        let is_significant = |s: &Scalar| {
            if exact {
                !s.is_exactly_zero()
            } else {
                s.abs_f64() > threshold
            }
        };
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let pivot = if exact {
                (pivot_row..m.rows).find(|&r| is_significant(m.get(r, col)))
            } else {
                (pivot_row..m.rows)
                    .max_by(|&a, &b| {
                        m.get(a, col)
                            .abs_f64()
                            .total_cmp(&m.get(b, col).abs_f64())
                    })
                    .filter(|&r| is_significant(m.get(r, col)))
            };
            let Some(pivot) = pivot else { continue };
            m.swap_rows(pivot, pivot_row);
            let pivot_value = m.get(pivot_row, col).clone();
            for r in (pivot_row + 1)..m.rows {
                if m.get(r, col).is_exactly_zero() {
                    continue;
                }
                let factor = m.get(r, col).div(&pivot_value).expect("nonzero pivot");
                for c in col..m.cols {
                    let updated = m.get(r, c) - &(&factor * m.get(pivot_row, c));
                    m.set(r, c, updated);
                }
                m.set(r, col, Scalar::zero());
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self, pivot_tol: f64) -> usize {
        self.echelon(pivot_tol).1
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular (exactly,
    /// or below the pivot threshold in `Approx` mode).
    pub fn inverse(&self, pivot_tol: f64) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let exact = self.all_exact();
        let threshold = if exact { 0.0 } else { pivot_tol * self.max_abs() };
        let mut m = self.clone();
        let mut inv = Matrix::identity(n);
        if !exact {
            for entry in &mut m.data {
                *entry = entry.to_approx();
            }
            for entry in &mut inv.data {
                *entry = entry.to_approx();
            }
        }
        for col in 0..n {
            let pivot = if exact {
                (col..n).find(|&r| !m.get(r, col).is_exactly_zero())?
            } else {
                let best = (col..n)
                    .max_by(|&a, &b| {
                        m.get(a, col)
                            .abs_f64()
                            .total_cmp(&m.get(b, col).abs_f64())
                    })?;
                if m.get(best, col).abs_f64() <= threshold {
                    return None;
                }
                best
            };
            m.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let pivot_value = m.get(col, col).clone();
            let pivot_inv = pivot_value.recip().ok()?;
            for c in 0..n {
                let scaled = m.get(col, c) * &pivot_inv;
                m.set(col, c, scaled);
                let scaled = inv.get(col, c) * &pivot_inv;
                inv.set(col, c, scaled);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_exactly_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..n {
                    let updated = m.get(r, c) - &(&factor * m.get(col, c));
                    m.set(r, c, updated);
                    let updated = inv.get(r, c) - &(&factor * inv.get(col, c));
                    inv.set(r, c, updated);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}
