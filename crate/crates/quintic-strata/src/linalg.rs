//! Dense exact linear algebra over Q and F_p: rank, kernel, solve.
//!
//! Everything reduces to one Gauss-Jordan engine.  Over Q the pivot with the
//! smallest bit-size in its column is chosen to limit coefficient growth;
//! over F_p any nonzero entry serves.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::MixedFields(format!("{} vs {field}", e.field())));
            }
        }
        Ok(ScalarMatrix { field, rows, cols, entries })
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one(field);
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(field, rows, cols, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector length {} vs {} columns", v.len(), self.cols)));
        }
        let mut out = vec![Scalar::zero(self.field); self.rows];
        for i in 0..self.rows {
            let mut acc = Scalar::zero(self.field);
            for j in 0..self.cols {
                if !self.at(i, j).is_zero() && !v[j].is_zero() {
                    acc = acc.add_uc(&self.at(i, j).mul_uc(&v[j]));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// In-place Gauss-Jordan reduction.  Returns the pivot column of each
    /// pivot row, in order.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // Pick the nonzero entry of smallest bit-size in this column.
            let mut best: Option<(usize, u64)> = None;
            for r in row..self.rows {
                let e = self.at(r, col);
                if !e.is_zero() {
                    let sz = e.bit_size();
                    if best.map_or(true, |(_, b)| sz < b) {
                        best = Some((r, sz));
                    }
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = self.at(row, col).inv().expect("nonzero pivot");
            for j in col..self.cols {
                let v = self.at(row, j).mul_uc(&inv);
                *self.at_mut(row, j) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j).sub_uc(&factor.mul_uc(self.at(row, j)));
                        *self.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank over the matrix's field; 0 for an empty matrix.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Basis of the right null space; `cols - rank` vectors with `m*v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Scalar::zero(self.field); self.cols];
            v[free] = Scalar::one(self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `m*x = b` when consistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!("rhs length {} vs {} rows", b.len(), self.rows)));
        }
        for e in b {
            if e.field() != self.field {
                return Err(Error::MixedFields(format!("{} vs {}", e.field(), self.field)));
            }
        }
        let mut aug = Self::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Entry-wise reduction of a rational matrix modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<ScalarMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.reduce_mod(p)?);
        }
        ScalarMatrix::new(Field::Fp(p), self.rows, self.cols, entries)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::Shape("hstack shape/field mismatch".into()));
        }
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: usize, cols: usize, vals: &[i64]) -> ScalarMatrix {
        let entries = vals.iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
        ScalarMatrix::new(Field::Q, rows, cols, entries).unwrap()
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(ScalarMatrix::identity(Field::Q, 2).rank(), 2);
        assert_eq!(qm(2, 2, &[0, 0, 0, 0]).rank(), 0);
        assert_eq!(ScalarMatrix::zero(Field::Q, 0, 0).rank(), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        assert_eq!(qm(2, 3, &[1, 2, 3, 2, 4, 6]).rank(), 1);
    }

    #[test]
    fn kernel_of_row() {
        // (1,0,0) has kernel {x1 = 0} of dimension 2.
        let m = qm(1, 3, &[1, 0, 0]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).unwrap().iter().all(|e| e.is_zero()));
            assert!(v[0].is_zero());
        }
    }

    #[test]
    fn kernel_of_invertible_is_empty() {
        let m = qm(3, 3, &[1, 2, 0, 0, 1, 4, 5, 6, 1]);
        assert_eq!(m.rank(), 3);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_hand_example() {
        // rows (1,1,0),(0,1,1): kernel spanned by (1,-1,1).
        let m = qm(2, 3, &[1, 1, 0, 0, 1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(m.apply(v).unwrap().iter().all(|e| e.is_zero()));
        // Proportional to (1,-1,1).
        let r = v[0].div(&v[2]).unwrap();
        assert!(r.is_one());
        assert_eq!(v[1].neg(), v[2]);
    }

    #[test]
    fn solve_cases() {
        let id = ScalarMatrix::identity(Field::Q, 3);
        let b: Vec<_> = [3, -1, 2].iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let z = ScalarMatrix::zero(Field::Q, 2, 2);
        let b2: Vec<_> = [1, 0].iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
        assert!(z.solve(&b2).unwrap().is_none());

        // (1,1;0,1) x = (3,1) -> (2,1)
        let m = qm(2, 2, &[1, 1, 0, 1]);
        let b3: Vec<_> = [3, 1].iter().map(|&v| Scalar::from_i64(Field::Q, v)).collect();
        let x = m.solve(&b3).unwrap().unwrap();
        assert_eq!(x[0], Scalar::from_i64(Field::Q, 2));
        assert_eq!(x[1], Scalar::from_i64(Field::Q, 1));
    }

    #[test]
    fn rank_mod_p_matches_generic() {
        let m = qm(3, 4, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.reduce_mod(1000003).unwrap().rank(), 2);
    }
}
