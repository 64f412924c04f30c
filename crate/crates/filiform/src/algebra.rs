//! Structure-constant tables and the predicates that characterise filiform
//! Leibniz algebras.
//!
//! An algebra of dimension `n` is stored as the dense tensor `c[i][j][k]`
//! with `[e_i, e_j] = sum_k c[i][j][k] e_k`.  The module provides bracket
//! evaluation on coordinate vectors, the Leibniz defect (exactly zero iff
//! the Leibniz identity holds), the lower central series and the filiform
//! test, plus a JSON-friendly sparse file format.

use crate::linalg::{Matrix, RANK_PIVOT_TOL};
use crate::scalar::{Scalar, ScalarMode};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("table entry ({i},{j},{k}) out of range for dimension {dim}")]
    EntryOutOfRange { i: usize, j: usize, k: usize, dim: usize },
}

/// Coordinate vector with respect to the basis `e_0, ..., e_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    /// The standard basis vector `e_idx`.
    pub fn basis(dim: usize, idx: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.0[idx] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Dense multiplication table `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraTable {
    dim: usize,
    constants: Vec<Scalar>,
}

impl AlgebraTable {
    /// The zero algebra of the given dimension.
    pub fn new(dim: usize) -> Self {
        AlgebraTable {
            dim,
            constants: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        self.constants[(i * self.dim + j) * self.dim + k] = value;
    }

    /// The coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        let base = (i * self.dim + j) * self.dim;
        &self.constants[base..base + self.dim]
    }

    /// `Exact` iff every structure constant is exact.
    pub fn mode(&self) -> ScalarMode {
        if self.constants.iter().all(Scalar::is_exact) {
            ScalarMode::Exact
        } else {
            ScalarMode::Approx
        }
    }

    /// The same table with every constant demoted to floating point.
    pub fn to_approx(&self) -> AlgebraTable {
        AlgebraTable {
            dim: self.dim,
            constants: self.constants.iter().map(Scalar::to_approx).collect(),
        }
    }

    /// Largest structure-constant modulus.
    pub fn max_abs(&self) -> f64 {
        self.constants.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// `[e_i, v]` for a coordinate slice `v`.
    fn bracket_basis_vec(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (l, coeff) in v.iter().enumerate() {
            if coeff.is_exactly_zero() {
                continue;
            }
            for (k, c) in self.bracket_basis(i, l).iter().enumerate() {
                if !c.is_exactly_zero() {
                    out[k] = &out[k] + &(coeff * c);
                }
            }
        }
        out
    }

    /// `[v, e_j]` for a coordinate slice `v`.
    pub fn bracket_vec_basis(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (l, coeff) in v.iter().enumerate() {
            if coeff.is_exactly_zero() {
                continue;
            }
            for (k, c) in self.bracket_basis(l, j).iter().enumerate() {
                if !c.is_exactly_zero() {
                    out[k] = &out[k] + &(coeff * c);
                }
            }
        }
        out
    }

    /// Bilinear bracket `[x, y]` of two coordinate vectors.
    pub fn product(&self, x: &Vector, y: &Vector) -> Result<Vector, AlgebraError> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.dim,
                    got: v.dim(),
                });
            }
        }
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_exactly_zero() {
                continue;
            }
            let partial = self.bracket_basis_vec(i, &y.0);
            for (k, p) in partial.into_iter().enumerate() {
                if !p.is_exactly_zero() {
                    out[k] = &out[k] + &(xi * &p);
                }
            }
        }
        Ok(Vector(out))
    }

    /// Largest squared-modulus violation of the Leibniz identity
    /// `[x,[y,z]] = [[x,y],z] - [[x,z],y]` over all basis triples.
    ///
    /// In `Exact` mode the result is an exact non-negative rational that is
    /// zero precisely when the table is a Leibniz algebra.
    pub fn leibniz_defect(&self) -> Scalar {
        let mut best = Scalar::zero();
        let mut best_abs = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let left = self.bracket_basis(i, j).to_vec();
                for k in 0..self.dim {
                    let t1 = self.bracket_basis_vec(i, self.bracket_basis(j, k));
                    let t2 = self.bracket_vec_basis(&left, k);
                    let t3 = self.bracket_vec_basis(self.bracket_basis(i, k), j);
                    let mut norm = Scalar::zero();
                    for m in 0..self.dim {
                        let d = &(&t1[m] - &t2[m]) + &t3[m];
                        if !d.is_exactly_zero() {
                            norm = &norm + &(&d * &d.conj());
                        }
                    }
                    let abs = norm.abs_f64();
                    if (best.is_exactly_zero() && !norm.is_exactly_zero()) || abs > best_abs {
                        best_abs = abs;
                        best = norm;
                    }
                }
            }
        }
        best
    }

    /// Dimensions `[dim L^1, dim L^2, ...]` of the lower central series
    /// `L^1 = L`, `L^{k+1} = [L^k, L]`, recorded until the dimension reaches
    /// zero or repeats.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let mut dims = vec![self.dim];
        let mut basis: Vec<Vec<Scalar>> =
            (0..self.dim).map(|i| Vector::basis(self.dim, i).0).collect();
        loop {
            let mut products = Vec::with_capacity(basis.len() * self.dim);
            for row in &basis {
                for j in 0..self.dim {
                    products.push(self.bracket_vec_basis(row, j));
                }
            }
            let (echelon, rank) = Matrix::from_rows(products).echelon(RANK_PIVOT_TOL);
            dims.push(rank);
            if rank == 0 || rank == dims[dims.len() - 2] {
                return dims;
            }
            basis = (0..rank).map(|r| echelon.row(r).to_vec()).collect();
        }
    }

    /// A dimension-`n` algebra is filiform when `dim L^i = n - i` for
    /// `2 <= i <= n`, i.e. the series is `[n, n-2, n-3, ..., 1, 0]`.
    pub fn is_filiform(&self) -> bool {
        if self.dim < 2 {
            return false;
        }
        let mut expected = vec![self.dim];
        expected.extend((0..=self.dim - 2).rev());
        self.lower_central_series() == expected
    }

    /// Sparse file form, nonzero entries in lexicographic order.
    pub fn to_file(&self) -> TableFile {
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_exactly_zero() {
                        entries.push(TableEntry {
                            i,
                            j,
                            k,
                            c: c.clone(),
                        });
                    }
                }
            }
        }
        TableFile {
            dim: self.dim,
            entries,
        }
    }

    pub fn from_file(file: &TableFile) -> Result<AlgebraTable, AlgebraError> {
        let mut table = AlgebraTable::new(file.dim);
        for e in &file.entries {
            if e.i >= file.dim || e.j >= file.dim || e.k >= file.dim {
                return Err(AlgebraError::EntryOutOfRange {
                    i: e.i,
                    j: e.j,
                    k: e.k,
                    dim: file.dim,
                });
            }
            table.set(e.i, e.j, e.k, e.c.clone());
        }
        Ok(table)
    }
}

/// JSON schema for a multiplication table: `{"dim": n, "entries": [...]}`
/// listing only nonzero structure constants.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub dim: usize,
    pub entries: Vec<TableEntry>,
}

/// One nonzero structure constant `c[i][j][k]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
}

/// Human-readable bracket lines, e.g. `[e1,e0] = e2 + 1/2 e4`.
pub fn table_text(table: &AlgebraTable) -> String {
    let mut out = String::new();
    for i in 0..table.dim() {
        for j in 0..table.dim() {
            let row = table.bracket_basis(i, j);
            if row.iter().all(Scalar::is_exactly_zero) {
                continue;
            }
            let mut terms = Vec::new();
            for (k, c) in row.iter().enumerate() {
                if c.is_exactly_zero() {
                    continue;
                }
                if *c == Scalar::one() {
                    terms.push(format!("e{k}"));
                } else if *c == Scalar::from_int(-1) {
                    terms.push(format!("-e{k}"));
                } else {
                    terms.push(format!("({c}) e{k}"));
                }
            }
            out.push_str(&format!("[e{i},e{j}] = {}\n", terms.join(" + ")));
        }
    }
    if out.is_empty() {
        out.push_str("(all brackets vanish)\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// dim-3 Heisenberg-style Lie bracket: [e0,e1] = e2 = -[e1,e0].
    fn heisenberg() -> AlgebraTable {
        let mut t = AlgebraTable::new(3);
        t.set(0, 1, 2, Scalar::one());
        t.set(1, 0, 2, Scalar::from_int(-1));
        t
    }

    #[test]
    fn bracket_is_bilinear() {
        let t = heisenberg();
        let x = Vector(vec![Scalar::ratio(1, 2), Scalar::from_int(3), Scalar::zero()]);
        let y = Vector(vec![Scalar::from_int(2), Scalar::i(), Scalar::one()]);
        let xy = t.product(&x, &y).unwrap();
        // [x,y] = (1/2 * i - 3 * 2) e2
        let expected = &(&Scalar::ratio(1, 2) * &Scalar::i()) - &Scalar::from_int(6);
        assert_eq!(xy.0[2], expected);
        assert!(xy.0[0].is_exactly_zero() && xy.0[1].is_exactly_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let t = heisenberg();
        let short = Vector::zero(2);
        assert!(matches!(
            t.product(&short, &Vector::zero(3)),
            Err(AlgebraError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn leibniz_defect_exactly_zero_for_lie_bracket() {
        assert!(heisenberg().leibniz_defect().is_exactly_zero());
    }

    #[test]
    fn leibniz_defect_positive_for_broken_table() {
        let mut t = heisenberg();
        // [e2, e1] = e0 breaks the identity.
        t.set(2, 1, 0, Scalar::one());
        let defect = t.leibniz_defect();
        assert!(!defect.is_exactly_zero());
        assert!(defect.is_exact());
    }

    #[test]
    fn series_of_zero_algebra_terminates() {
        assert_eq!(AlgebraTable::new(4).lower_central_series(), vec![4, 0]);
        assert!(!AlgebraTable::new(4).is_filiform());
    }

    #[test]
    fn table_file_round_trip() {
        let t = heisenberg();
        let file = t.to_file();
        assert_eq!(file.entries.len(), 2);
        let back = AlgebraTable::from_file(&file).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn out_of_range_entries_rejected() {
        let file = TableFile {
            dim: 2,
            entries: vec![TableEntry {
                i: 0,
                j: 0,
                k: 2,
                c: Scalar::one(),
            }],
        };
        assert!(AlgebraTable::from_file(&file).is_err());
    }
}
