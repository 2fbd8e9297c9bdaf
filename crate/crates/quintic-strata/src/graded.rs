//! Direct sums of line bundles and graded morphisms between them.
//!
//! A morphism is an m x n matrix of forms with entry (i, j) homogeneous of
//! degree `target[i] - source[j]`.  These matrices present one-dimensional
//! sheaves as cokernels; every operation below stays at the matrix level.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{monomial_count, Form};
use crate::linalg::ScalarMatrix;
use crate::scalar::{Field, Scalar};

/// An ordered direct sum of line bundle twists, canonically descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistSum {
    twists: Vec<i64>,
}

impl TwistSum {
    pub fn new(mut twists: Vec<i64>) -> TwistSum {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        TwistSum { twists }
    }

    pub fn len(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn twist(&self, i: usize) -> i64 {
        self.twists[i]
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn sum(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// h^0 of the twisted sum: sum of C(t + m + 2, 2) over nonnegative t + m.
    pub fn h0(&self, m: i64) -> usize {
        self.twists.iter().map(|&t| monomial_count(t + m)).sum()
    }

    /// Dimension of the graded endomorphism algebra of the sum.
    pub fn end_dim(&self) -> usize {
        let mut dim = 0;
        for &ti in &self.twists {
            for &tj in &self.twists {
                dim += monomial_count(ti - tj);
            }
        }
        dim
    }
}

impl fmt::Display for TwistSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.twists.len() {
            let t = self.twists[i];
            let mut count = 1;
            while i + count < self.twists.len() && self.twists[i + count] == t {
                count += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if t == 0 {
                write!(f, "O")?;
            } else {
                write!(f, "O({t})")?;
            }
            if count > 1 {
                write!(f, "^{count}")?;
            }
            i += count;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMorphism {
    field: Field,
    source: TwistSum,
    target: TwistSum,
    /// row-major, target.len() x source.len()
    entries: Vec<Form>,
}

impl GradedMorphism {
    /// Build a morphism, canonically sorting source and target twists (the
    /// entry grid is permuted along).  Degree compatibility is checked by
    /// `validate`; `new` only enforces shape and field agreement.
    pub fn new(source: Vec<i64>, target: Vec<i64>, entries: Vec<Form>) -> Result<GradedMorphism> {
        let m = target.len();
        let n = source.len();
        if entries.len() != m * n {
            return Err(Error::Shape(format!(
                "expected {} entries for {m}x{n}, got {}",
                m * n,
                entries.len()
            )));
        }
        let field = entries
            .first()
            .map(|f| f.field())
            .unwrap_or(Field::Q);
        for e in &entries {
            if e.field() != field {
                return Err(Error::MixedFields("morphism entries over mixed fields".into()));
            }
        }
        // Stable sort permutations for rows and columns.
        let mut row_perm: Vec<usize> = (0..m).collect();
        row_perm.sort_by_key(|&i| -target[i]);
        let mut col_perm: Vec<usize> = (0..n).collect();
        col_perm.sort_by_key(|&j| -source[j]);
        let tgt = TwistSum::new(target.clone());
        let src = TwistSum::new(source.clone());
        let mut grid = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let e = entries[row_perm[i] * n + col_perm[j]].clone();
                let want = tgt.twist(i) - src.twist(j);
                // Zero entries adopt the nominal degree of their slot.
                if e.is_zero() {
                    grid.push(Form::zero(field, want.max(0) as usize));
                } else {
                    grid.push(e);
                }
            }
        }
        Ok(GradedMorphism { field, source: src, target: tgt, entries: grid })
    }

    pub fn from_fn(
        source: Vec<i64>,
        target: Vec<i64>,
        field: Field,
        f: impl Fn(usize, usize) -> Form,
    ) -> Result<GradedMorphism> {
        let m = target.len();
        let n = source.len();
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        let _ = field;
        GradedMorphism::new(source, target, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &TwistSum {
        &self.source
    }

    pub fn target(&self) -> &TwistSum {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.cols() + j]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut Form {
        let n = self.cols();
        &mut self.entries[i * n + j]
    }

    /// Both grading invariants: entries homogeneous of degree t_i - s_j, and
    /// zero wherever that degree is negative.
    pub fn validate(&self) -> bool {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let want = self.target.twist(i) - self.source.twist(j);
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                if want < 0 || e.degree() != want as usize {
                    return false;
                }
            }
        }
        true
    }

    pub fn validated(self) -> Result<GradedMorphism> {
        if self.validate() {
            Ok(self)
        } else {
            Err(Error::InvalidGrading(format!(
                "entry degrees incompatible with {} -> {}",
                self.source, self.target
            )))
        }
    }

    /// Matrix product self ∘ phi (apply phi first).
    pub fn compose(&self, phi: &GradedMorphism) -> Result<GradedMorphism> {
        if self.source != phi.target {
            return Err(Error::Shape(format!(
                "compose: inner twists differ ({} vs {})",
                self.source, phi.target
            )));
        }
        if self.field != phi.field {
            return Err(Error::MixedFields("compose over mixed fields".into()));
        }
        let m = self.rows();
        let n = phi.cols();
        let inner = self.cols();
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let want = (self.target.twist(i) - phi.source.twist(j)).max(0) as usize;
                let mut acc = Form::zero(self.field, want);
                for k in 0..inner {
                    let a = self.entry(i, k);
                    let b = phi.entry(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        GradedMorphism::new(phi.source.twists().to_vec(), self.target.twists().to_vec(), entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact determinant of a square morphism.
    pub fn determinant(&self) -> Result<Form> {
        if self.rows() != self.cols() {
            return Err(Error::Shape(format!("determinant of {}x{}", self.rows(), self.cols())));
        }
        let n = self.rows();
        let degree = (self.target.sum() - self.source.sum()).max(0) as usize;
        if n == 0 {
            return Form::constant(self.field, Scalar::one(self.field));
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (0..n).collect();
        let d = self.det_on(&rows, &cols)?;
        if d.is_zero() {
            Ok(Form::zero(self.field, degree))
        } else {
            Ok(d)
        }
    }

    fn det_on(&self, rows: &[usize], cols: &[usize]) -> Result<Form> {
        let k = rows.len();
        if k == 0 {
            return Form::constant(self.field, Scalar::one(self.field));
        }
        if k == 1 {
            return Ok(self.entry(rows[0], cols[0]).clone());
        }
        // Expand along the row with the most zeros.
        let mut best_row = 0;
        let mut best_zeros = 0;
        for (ri, &r) in rows.iter().enumerate() {
            let zeros = cols.iter().filter(|&&c| self.entry(r, c).is_zero()).count();
            if ri == 0 || zeros > best_zeros {
                best_zeros = zeros;
                best_row = ri;
            }
        }
        let r = rows[best_row];
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let mut acc: Option<Form> = None;
        for (ci, &c) in cols.iter().enumerate() {
            let e = self.entry(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = self.det_on(&sub_rows, &sub_cols)?;
            if minor.is_zero() {
                continue;
            }
            let mut term = e.mul(&minor)?;
            if (best_row + ci) % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(prev) => prev.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Form::zero(self.field, 0)))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(!self.determinant()?.is_zero())
    }

    /// Transposed presentation of the dual sheaf twisted by k: source twists
    /// become `-3 + k - b_j`, target twists `-3 + k - a_i`.
    pub fn dual_resolution(&self, k: i64) -> Result<GradedMorphism> {
        if self.rows() != self.cols() {
            return Err(Error::Shape("dual of a non-square morphism".into()));
        }
        if !self.is_injective()? {
            return Err(Error::NotInjective);
        }
        let new_source: Vec<i64> = self.target.twists().iter().map(|&b| -3 + k - b).collect();
        let new_target: Vec<i64> = self.source.twists().iter().map(|&a| -3 + k - a).collect();
        let m = self.cols(); // new rows
        let n = self.rows(); // new cols
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                entries.push(self.entry(j, i).clone());
            }
        }
        GradedMorphism::new(new_source, new_target, entries)?.validated()
    }

    /// Cancel invertible constant blocks: repeatedly pick the leftmost,
    /// topmost nonzero constant entry, clear its column with row operations
    /// and delete its row/column pair.  The cokernel is unchanged.
    pub fn minimize(&self) -> GradedMorphism {
        let mut m = self.clone();
        loop {
            let mut pivot = None;
            'outer: for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let want = m.target.twist(i) - m.source.twist(j);
                    if want == 0 && !m.entry(i, j).is_zero() {
                        pivot = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((pi, pj)) = pivot else { return m };
            let pscalar = m.entry(pi, pj).coeff((0, 0, 0));
            let pinv = pscalar.inv().expect("nonzero constant pivot");
            // Row operations clear column pj; column operations would then
            // only touch row pi, which is deleted, so they are skipped.
            for i in 0..m.rows() {
                if i == pi || m.entry(i, pj).is_zero() {
                    continue;
                }
                let factor = m.entry(i, pj).scale(&pinv).expect("same field");
                for j in 0..m.cols() {
                    if m.entry(pi, j).is_zero() {
                        continue;
                    }
                    let delta = factor.mul(m.entry(pi, j)).expect("same field");
                    let updated = m.entry(i, j).sub(&delta).expect("degree-compatible");
                    *m.entry_mut(i, j) = updated;
                }
            }
            // Delete row pi and column pj.
            let mut source = m.source.twists().to_vec();
            let mut target = m.target.twists().to_vec();
            source.remove(pj);
            target.remove(pi);
            let mut entries = Vec::with_capacity((m.rows() - 1) * (m.cols() - 1));
            for i in 0..m.rows() {
                if i == pi {
                    continue;
                }
                for j in 0..m.cols() {
                    if j == pj {
                        continue;
                    }
                    entries.push(m.entry(i, j).clone());
                }
            }
            m = GradedMorphism::new(source, target, entries).expect("shape preserved");
        }
    }

    /// Hilbert data (r, chi) of the cokernel from the symbolic polynomial
    /// P(t) = sum C(b+t+2, 2) - sum C(a+t+2, 2).
    pub fn hilbert(&self) -> Result<HilbertData> {
        if self.rows() != self.cols() {
            return Err(Error::RankMismatch(format!(
                "t^2 coefficient {} does not vanish",
                (self.rows() as i64 - self.cols() as i64)
            )));
        }
        let r = self.target.sum() - self.source.sum();
        let quad = |t: i64| (t + 2) * (t + 1) / 2;
        let chi: i64 = self.target.twists().iter().map(|&b| quad(b)).sum::<i64>()
            - self.source.twists().iter().map(|&a| quad(a)).sum::<i64>();
        if r <= 0 {
            return Err(Error::RankMismatch(format!("multiplicity {r} is not positive")));
        }
        Ok(HilbertData { multiplicity: r, euler: chi })
    }

    /// Rows (resp. columns) whose target (resp. source) twist equals t.
    pub fn rows_with_twist(&self, t: i64) -> Vec<usize> {
        (0..self.rows()).filter(|&i| self.target.twist(i) == t).collect()
    }

    pub fn cols_with_twist(&self, t: i64) -> Vec<usize> {
        (0..self.cols()).filter(|&j| self.source.twist(j) == t).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMorphism {
        let source: Vec<i64> = cols.iter().map(|&j| self.source.twist(j)).collect();
        let target: Vec<i64> = rows.iter().map(|&i| self.target.twist(i)).collect();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMorphism::new(source, target, entries).expect("valid submatrix")
    }

    /// Signed maximal minors in deletion order.  For a single row or column
    /// these are the entries; otherwise the matrix must be k x (k+1) or
    /// (k+1) x k and the i-th minor carries the cofactor sign (-1)^(i+1).
    pub fn maximal_minors(&self) -> Result<Vec<Form>> {
        let m = self.rows();
        let n = self.cols();
        if m == 1 {
            return Ok((0..n).map(|j| self.entry(0, j).clone()).collect());
        }
        if n == 1 {
            return Ok((0..m).map(|i| self.entry(i, 0).clone()).collect());
        }
        if n == m + 1 {
            let rows: Vec<usize> = (0..m).collect();
            let mut out = Vec::with_capacity(n);
            for skip in 0..n {
                let cols: Vec<usize> = (0..n).filter(|&c| c != skip).collect();
                let mut d = self.det_on(&rows, &cols)?;
                if skip % 2 == 1 {
                    d = d.neg();
                }
                out.push(d);
            }
            Ok(out)
        } else if m == n + 1 {
            let cols: Vec<usize> = (0..n).collect();
            let mut out = Vec::with_capacity(m);
            for skip in 0..m {
                let rows: Vec<usize> = (0..m).filter(|&r| r != skip).collect();
                let mut d = self.det_on(&rows, &cols)?;
                if skip % 2 == 1 {
                    d = d.neg();
                }
                out.push(d);
            }
            Ok(out)
        } else {
            Err(Error::Shape(format!("maximal minors of {m}x{n}")))
        }
    }

    /// Plain (unsigned) maximal minors by deletion, for kernel computations.
    pub fn plain_maximal_minors(&self) -> Result<Vec<Form>> {
        let m = self.rows();
        let n = self.cols();
        if n != m + 1 {
            return Err(Error::Shape(format!("plain maximal minors of {m}x{n}")));
        }
        let rows: Vec<usize> = (0..m).collect();
        let mut out = Vec::with_capacity(n);
        for skip in 0..n {
            let cols: Vec<usize> = (0..n).filter(|&c| c != skip).collect();
            out.push(self.det_on(&rows, &cols)?);
        }
        Ok(out)
    }

    /// g * self * h for constant square matrices; the result must preserve
    /// the grading, which holds exactly when g and h are block-diagonal with
    /// respect to equal twists.
    pub fn recombine(&self, g: &ScalarMatrix, h: &ScalarMatrix) -> Result<GradedMorphism> {
        if g.rows() != self.rows() || g.cols() != self.rows() {
            return Err(Error::Shape("left factor must be target-square".into()));
        }
        if h.rows() != self.cols() || h.cols() != self.cols() {
            return Err(Error::Shape("right factor must be source-square".into()));
        }
        let m = self.rows();
        let n = self.cols();
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                let want = (self.target.twist(i) - self.source.twist(j)).max(0) as usize;
                let mut acc = Form::zero(self.field, want);
                for k in 0..m {
                    if g.at(i, k).is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        if h.at(l, j).is_zero() || self.entry(k, l).is_zero() {
                            continue;
                        }
                        let coeff = g.at(i, k).mul(h.at(l, j))?;
                        acc = acc.add(&self.entry(k, l).scale(&coeff)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        GradedMorphism::new(self.source.twists().to_vec(), self.target.twists().to_vec(), entries)?
            .validated()
    }

    pub fn reduce_mod(&self, p: u64) -> Result<GradedMorphism> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.reduce_mod(p)?);
        }
        GradedMorphism::new(self.source.twists().to_vec(), self.target.twists().to_vec(), entries)
    }

    /// The shape as a pair of twist multisets, used for catalogue matching.
    pub fn shape(&self) -> (Vec<i64>, Vec<i64>) {
        (self.source.twists().to_vec(), self.target.twists().to_vec())
    }
}

/// Hilbert polynomial data P(t) = r t + chi of a presented sheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertData {
    pub multiplicity: i64,
    pub euler: i64,
}
