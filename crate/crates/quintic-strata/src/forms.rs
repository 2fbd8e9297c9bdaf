//! Homogeneous polynomials in the fixed coordinates x, y, z.
//!
//! Forms are stored sparsely as exponent-triple -> coefficient maps in
//! graded-lex order (x > y > z).  Degrees in this crate never exceed single
//! digits, so divisibility and gcd are handled by direct division and a
//! dehomogenize-Euclid-rehomogenize pass; no modular gcd machinery.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::scalar::{is_negative, Field, Scalar};

/// Exponent triple (i, j, k) for x^i y^j z^k.
pub type Mono = (u8, u8, u8);

pub fn mono_degree(m: Mono) -> usize {
    m.0 as usize + m.1 as usize + m.2 as usize
}

/// Monomials of a given degree, descending graded-lex (x > y > z).
pub fn monomials(degree: usize) -> Vec<Mono> {
    let d = degree as u8;
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push((i, j, d - i - j));
        }
    }
    out
}

/// Number of monomials of degree d in three variables, i.e. C(d+2, 2).
pub fn monomial_count(degree: i64) -> usize {
    if degree < 0 {
        0
    } else {
        ((degree + 2) * (degree + 1) / 2) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    field: Field,
    degree: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl Form {
    /// The zero form.  It carries a nominal degree so that graded-morphism
    /// bookkeeping stays total.
    pub fn zero(field: Field, degree: usize) -> Form {
        Form { field, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: Field, mono: Mono, coeff: Scalar) -> Result<Form> {
        if coeff.field() != field {
            return Err(Error::MixedFields(format!("{} vs {field}", coeff.field())));
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Ok(Form { field, degree: mono_degree(mono), terms })
    }

    pub fn constant(field: Field, c: Scalar) -> Result<Form> {
        Form::monomial(field, (0, 0, 0), c)
    }

    pub fn one(field: Field) -> Form {
        Form::constant(field, Scalar::one(field)).expect("same field")
    }

    /// The coordinate form x, y or z (index 0, 1, 2).
    pub fn var(field: Field, index: usize) -> Form {
        let mono = match index {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            2 => (0, 0, 1),
            _ => panic!("variable index out of range"),
        };
        Form::monomial(field, mono, Scalar::one(field)).expect("same field")
    }

    pub fn from_terms(field: Field, degree: usize, terms: Vec<(Mono, Scalar)>) -> Result<Form> {
        let mut map: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            if c.field() != field {
                return Err(Error::MixedFields(format!("{} vs {field}", c.field())));
            }
            if mono_degree(m) != degree {
                return Err(Error::DegreeMismatch(format!(
                    "monomial of degree {} in a form of degree {degree}",
                    mono_degree(m)
                )));
            }
            let entry = match map.remove(&m) {
                Some(prev) => prev.add(&c)?,
                None => c,
            };
            if !entry.is_zero() {
                map.insert(m, entry);
            }
        }
        Ok(Form { field, degree, terms: map })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Mono) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(Mono, &Scalar)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    fn join(&self, other: &Form) -> Result<Field> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(Error::MixedFields(format!("{} vs {}", self.field, other.field)))
        }
    }

    /// Sum of two forms of equal degree; a zero form coerces to any degree.
    pub fn add(&self, other: &Form) -> Result<Form> {
        self.join(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "adding degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = match terms.remove(m) {
                Some(prev) => prev.add_uc(c),
                None => c.clone(),
            };
            if !entry.is_zero() {
                terms.insert(*m, entry);
            }
        }
        Ok(Form { field: self.field, degree: self.degree, terms })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.neg())).collect();
        Form { field: self.field, degree: self.degree, terms }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.join(other)?;
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = (m1.0 + m2.0, m1.1 + m2.1, m1.2 + m2.2);
                let c = c1.mul_uc(c2);
                let entry = match terms.remove(&m) {
                    Some(prev) => prev.add_uc(&c),
                    None => c,
                };
                if !entry.is_zero() {
                    terms.insert(m, entry);
                }
            }
        }
        Ok(Form { field: self.field, degree, terms })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Form> {
        if c.field() != self.field {
            return Err(Error::MixedFields(format!("{} vs {}", c.field(), self.field)));
        }
        if c.is_zero() {
            return Ok(Form::zero(self.field, self.degree));
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v.mul_uc(c))).collect();
        Ok(Form { field: self.field, degree: self.degree, terms })
    }

    pub fn pow(&self, e: usize) -> Form {
        let mut acc = Form::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Scale so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Form {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv).expect("same field")
            }
        }
    }

    /// Exact quotient `self / divisor`, or None when not divisible.
    pub fn div_exact(&self, divisor: &Form) -> Option<Form> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Form::zero(self.field, self.degree.saturating_sub(divisor.degree)));
        }
        if divisor.degree > self.degree {
            return None;
        }
        let qdeg = self.degree - divisor.degree;
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Form::zero(self.field, qdeg);
        while let Some((rm, rc)) = rem.leading() {
            if rm.0 < dm.0 || rm.1 < dm.1 || rm.2 < dm.2 {
                return None;
            }
            let tm = (rm.0 - dm.0, rm.1 - dm.1, rm.2 - dm.2);
            let tc = rc.div_uc(dc);
            let t = Form::monomial(self.field, tm, tc).expect("same field");
            quot = quot.add(&t).expect("same degree");
            rem = rem.sub(&t.mul(divisor).expect("same field")).expect("same degree");
        }
        Some(quot)
    }

    /// Entry-wise reduction modulo p (rational forms only).
    pub fn reduce_mod(&self, p: u64) -> Result<Form> {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            terms.push((*m, c.reduce_mod(p)?));
        }
        Form::from_terms(Field::Fp(p), self.degree, terms)
    }

    /// Coefficient vector in the monomial basis of the form's degree,
    /// descending graded-lex.
    pub fn coeff_vector(&self) -> Vec<Scalar> {
        monomials(self.degree).into_iter().map(|m| self.coeff(m)).collect()
    }

    /// Max power of the given variable (0 = x, 1 = y, 2 = z) dividing the form.
    fn min_var_exponent(&self, var: usize) -> u8 {
        self.terms
            .keys()
            .map(|m| match var {
                0 => m.0,
                1 => m.1,
                _ => m.2,
            })
            .min()
            .unwrap_or(0)
    }

    fn divide_var_power(&self, var: usize, e: u8) -> Form {
        if e == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let m2 = match var {
                    0 => (m.0 - e, m.1, m.2),
                    1 => (m.0, m.1 - e, m.2),
                    _ => (m.0, m.1, m.2 - e),
                };
                (m2, c.clone())
            })
            .collect();
        Form { field: self.field, degree: self.degree - e as usize, terms }
    }
}

/// True iff `g = f * h` for some homogeneous `h`.  `f` must be nonzero.
pub fn divides(f: &Form, g: &Form) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::Other("divisibility by the zero form".into()));
    }
    if g.is_zero() {
        return Ok(true);
    }
    if f.degree() == 1 {
        return Ok(reduce_mod_linear(g, f)?.is_zero());
    }
    Ok(g.div_exact(f).is_some())
}

/// Substitute the solved variable of a nonzero linear form into `q`.
/// The result is zero iff the linear form divides `q`.
pub fn reduce_mod_linear(q: &Form, ell: &Form) -> Result<Form> {
    if ell.is_zero() || ell.degree() != 1 {
        return Err(Error::DegreeMismatch("expected a nonzero linear form".into()));
    }
    q.join(ell)?;
    let field = q.field();
    let a = ell.coeff((1, 0, 0));
    let b = ell.coeff((0, 1, 0));
    let c = ell.coeff((0, 0, 1));
    // Prefer solving for x, then y, then z.
    let (var, pivot, rest): (usize, Scalar, [(usize, Scalar); 2]) = if !a.is_zero() {
        (0, a.clone(), [(1, b.clone()), (2, c.clone())])
    } else if !b.is_zero() {
        (1, b.clone(), [(0, a.clone()), (2, c.clone())])
    } else {
        (2, c.clone(), [(0, a.clone()), (1, b.clone())])
    };
    // solved variable = -(rest)/pivot
    let mut replacement = Form::zero(field, 1);
    for (idx, coeff) in rest {
        let scaled = Form::var(field, idx).scale(&coeff.div_uc(&pivot).neg())?;
        replacement = replacement.add(&scaled)?;
    }
    let mut out = Form::zero(field, q.degree());
    for (m, coeff) in q.terms() {
        let e = match var {
            0 => m.0,
            1 => m.1,
            _ => m.2,
        };
        let residual = match var {
            0 => (0, m.1, m.2),
            1 => (m.0, 0, m.2),
            _ => (m.0, m.1, 0),
        };
        let base = Form::monomial(field, residual, coeff.clone())?;
        let term = base.mul(&replacement.pow(e as usize))?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Rank of the coefficient matrix of the given forms (one row per form).
/// All nonzero forms must share one degree.
pub fn linear_span_dim(forms: &[Form]) -> Result<usize> {
    let nonzero: Vec<&Form> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(0);
    }
    let field = nonzero[0].field();
    let degree = nonzero[0].degree();
    for f in &nonzero {
        if f.degree() != degree {
            return Err(Error::DegreeMismatch(format!(
                "span of mixed degrees {} and {}",
                degree,
                f.degree()
            )));
        }
        if f.field() != field {
            return Err(Error::MixedFields("span over mixed fields".into()));
        }
    }
    let basis = monomials(degree);
    let entries: Vec<Scalar> = nonzero
        .iter()
        .flat_map(|f| basis.iter().map(|m| f.coeff(*m)).collect::<Vec<_>>())
        .collect();
    Ok(ScalarMatrix::new(field, nonzero.len(), basis.len(), entries)?.rank())
}

// ---------------------------------------------------------------------------
// gcd via dehomogenization
// ---------------------------------------------------------------------------

/// Univariate polynomial with ascending coefficients, used internally by gcd.
#[derive(Debug, Clone, PartialEq)]
struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    fn zero(field: Field) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    fn from_coeffs(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lc(&self) -> &Scalar {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![Scalar::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_uc(&a.mul_uc(b));
            }
        }
        UniPoly::from_coeffs(self.field, out)
    }

    fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(self.field, self.coeffs.iter().map(|c| c.mul_uc(s)).collect())
    }

    fn rem(&self, divisor: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= divisor.degree() {
            let shift = r.degree() - divisor.degree();
            let factor = r.lc().div_uc(divisor.lc());
            let mut next = r.coeffs.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                next[i + shift] = next[i + shift].sub_uc(&factor.mul_uc(c));
            }
            r = UniPoly::from_coeffs(self.field, next);
        }
        r
    }

    /// Exact division; panics unless divisible (internal use only).
    fn div_exact(&self, divisor: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut r = self.clone();
        let mut q = vec![Scalar::zero(self.field); self.degree() - divisor.degree() + 1];
        while !r.is_zero() && r.degree() >= divisor.degree() {
            let shift = r.degree() - divisor.degree();
            let factor = r.lc().div_uc(divisor.lc());
            q[shift] = factor.clone();
            let mut next = r.coeffs.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                next[i + shift] = next[i + shift].sub_uc(&factor.mul_uc(c));
            }
            r = UniPoly::from_coeffs(self.field, next);
        }
        assert!(r.is_zero(), "inexact univariate division");
        UniPoly::from_coeffs(self.field, q)
    }

    fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.lc().inv().expect("nonzero");
            a.scale(&inv)
        }
    }
}

/// Bivariate polynomial in (x, y): coefficients in k[y] indexed by x-power.
#[derive(Debug, Clone)]
struct BiPoly {
    field: Field,
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    fn from_coeffs(field: Field, mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { field, coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_x(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lc(&self) -> &UniPoly {
        self.coeffs.last().expect("nonzero")
    }

    fn scale_uni(&self, s: &UniPoly) -> BiPoly {
        BiPoly::from_coeffs(self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero(self.field);
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    fn primitive(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        BiPoly::from_coeffs(self.field, self.coeffs.iter().map(|q| q.div_exact(&c)).collect())
    }

    /// Pseudo-remainder of self by divisor in (k[y])[x].
    fn prem(&self, divisor: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        while !r.is_zero() && r.deg_x() >= divisor.deg_x() {
            let shift = r.deg_x() - divisor.deg_x();
            let rl = r.lc().clone();
            let dl = divisor.lc().clone();
            // r = r*dl - x^shift * rl * divisor
            let mut next: Vec<UniPoly> = r.coeffs.iter().map(|c| c.mul(&dl)).collect();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = c.mul(&rl);
                let idx = i + shift;
                let cur = next[idx].clone();
                // cur - t
                let neg = t.scale(&Scalar::one(self.field).neg());
                let sum_len = cur.coeffs.len().max(neg.coeffs.len());
                let mut sum = vec![Scalar::zero(self.field); sum_len];
                for (k, v) in cur.coeffs.iter().enumerate() {
                    sum[k] = sum[k].add_uc(v);
                }
                for (k, v) in neg.coeffs.iter().enumerate() {
                    sum[k] = sum[k].add_uc(v);
                }
                next[idx] = UniPoly::from_coeffs(self.field, sum);
            }
            r = BiPoly::from_coeffs(self.field, next);
        }
        r
    }

    fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive().scale_uni(&cont)
    }
}

/// Dehomogenize a z-free-stripped homogeneous form at z = 1.
fn dehomogenize(f: &Form) -> BiPoly {
    let field = f.field();
    let dx = f.terms().map(|(m, _)| m.0).max().unwrap_or(0) as usize;
    let dy = f.terms().map(|(m, _)| m.1).max().unwrap_or(0) as usize;
    let mut grid = vec![vec![Scalar::zero(field); dy + 1]; dx + 1];
    for (m, c) in f.terms() {
        grid[m.0 as usize][m.1 as usize] = grid[m.0 as usize][m.1 as usize].add_uc(c);
    }
    BiPoly::from_coeffs(
        field,
        grid.into_iter().map(|col| UniPoly::from_coeffs(field, col)).collect(),
    )
}

/// Homogenize a bivariate polynomial with z to its total degree.
fn rehomogenize(p: &BiPoly) -> Form {
    let field = p.field;
    let mut total = 0usize;
    for (i, c) in p.coeffs.iter().enumerate() {
        for (j, v) in c.coeffs.iter().enumerate() {
            if !v.is_zero() {
                total = total.max(i + j);
            }
        }
    }
    let mut terms = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate() {
        for (j, v) in c.coeffs.iter().enumerate() {
            if !v.is_zero() {
                terms.push(((i as u8, j as u8, (total - i - j) as u8), v.clone()));
            }
        }
    }
    Form::from_terms(field, total, terms).expect("homogeneous by construction")
}

/// Greatest common divisor of two homogeneous forms, monic in graded-lex.
/// Errors when both are zero.
pub fn gcd(f: &Form, g: &Form) -> Result<Form> {
    f.join(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::Other("gcd of two zero forms".into()));
    }
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    let field = f.field();
    let mut a = f.clone();
    let mut b = g.clone();
    let mut coordinate_part = Form::one(field);
    for var in 0..3 {
        let ea = a.min_var_exponent(var);
        let eb = b.min_var_exponent(var);
        a = a.divide_var_power(var, ea);
        b = b.divide_var_power(var, eb);
        let e = ea.min(eb);
        if e > 0 {
            coordinate_part = coordinate_part.mul(&Form::var(field, var).pow(e as usize))?;
        }
    }
    // z now divides neither, so dehomogenizing at z = 1 is faithful.
    let h = dehomogenize(&a).gcd(&dehomogenize(&b));
    let core = rehomogenize(&h);
    Ok(coordinate_part.mul(&core)?.monic())
}

/// gcd of a list (fold of the binary operation); errors when all are zero.
pub fn gcd_list(forms: &[Form]) -> Result<Form> {
    let mut acc: Option<Form> = None;
    for f in forms {
        if f.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => f.monic(),
            Some(prev) => gcd(&prev, f)?,
        });
    }
    acc.ok_or_else(|| Error::Other("gcd of an all-zero list".into()))
}

// ---------------------------------------------------------------------------
// linear factor extraction
// ---------------------------------------------------------------------------

/// Roots of a univariate polynomial (ascending coefficients) in the field.
/// Over Q this is the rational-root sieve; over F_p an exhaustive scan.
fn univariate_roots(field: Field, coeffs: &[Scalar]) -> Vec<Scalar> {
    let poly = UniPoly::from_coeffs(field, coeffs.to_vec());
    if poly.is_zero() || poly.degree() == 0 {
        return Vec::new();
    }
    let eval = |x: &Scalar| -> Scalar {
        let mut acc = Scalar::zero(field);
        for c in poly.coeffs.iter().rev() {
            acc = acc.mul_uc(x).add_uc(c);
        }
        acc
    };
    let mut roots = Vec::new();
    match field {
        Field::Fp(p) => {
            // Exhaustive scan; enumeration fields in this crate are small.
            for v in 0..p.min(2_000_000) {
                let x = Scalar::from_i64(field, v as i64);
                if eval(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
        Field::Q => {
            use num_bigint::BigInt;
            use num_traits::{One, Signed, Zero};
            // Clear denominators to an integer polynomial, strip x^k.
            let mut den = BigInt::one();
            for c in &poly.coeffs {
                if let Some(r) = c.to_rational() {
                    den = num_integer::lcm(den, r.denom().clone());
                }
            }
            let ints: Vec<BigInt> = poly
                .coeffs
                .iter()
                .map(|c| {
                    let r = c.to_rational().expect("rational field");
                    r.numer() * (&den / r.denom())
                })
                .collect();
            let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
            if low > 0 {
                roots.push(Scalar::zero(field));
            }
            let a0 = ints[low].abs();
            let atop = ints.last().expect("nonzero").abs();
            let p_divs = small_divisors(&a0);
            let q_divs = small_divisors(&atop);
            for p in &p_divs {
                for q in &q_divs {
                    for sign in [1i64, -1] {
                        let num = if sign > 0 { p.clone() } else { -p.clone() };
                        let cand = Scalar::Q(num_rational::BigRational::new(num, q.clone()));
                        if eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
    }
    roots
}

/// Positive divisors by trial division.  Best-effort beyond ~12 digits: a
/// residual prime cofactor is included as its own divisor candidate.
fn small_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let mut divisors = vec![BigInt::one()];
    if n.is_zero() {
        return divisors;
    }
    let mut m = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let mut steps = 0u64;
    while &d * &d <= m && steps < 1_000_000 {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
        steps += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    for (p, e) in primes {
        let mut next = Vec::new();
        for old in &divisors {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(old * &pe);
                pe *= &p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    divisors.dedup();
    divisors
}

/// All monic linear factors of a nonzero homogeneous form over its own field.
pub fn linear_factors(g: &Form) -> Result<Vec<Form>> {
    if g.is_zero() {
        return Err(Error::Other("linear factors of the zero form".into()));
    }
    let field = g.field();
    let mut found: Vec<Form> = Vec::new();
    let push = |f: Form, found: &mut Vec<Form>| {
        let m = f.monic();
        if !found.contains(&m) {
            found.push(m);
        }
    };
    let mut core = g.clone();
    for var in 0..3 {
        let e = core.min_var_exponent(var);
        if e > 0 {
            push(Form::var(field, var), &mut found);
            core = core.divide_var_power(var, e);
        }
    }
    if core.degree() == 0 {
        return Ok(found);
    }
    if core.degree() == 1 {
        push(core, &mut found);
        return Ok(found);
    }
    // Candidates of shape y - s*x - t*z: intersect the candidate root sets on
    // the lines x = 0 and x = z.
    let p = dehomogenize(&core);
    let eval_x = |x0: &Scalar| -> Vec<Scalar> {
        // coefficients in y of p(x0, y)
        let dy = p.coeffs.iter().map(|c| c.coeffs.len()).max().unwrap_or(0);
        let mut out = vec![Scalar::zero(field); dy];
        let mut xp = Scalar::one(field);
        for c in &p.coeffs {
            for (j, v) in c.coeffs.iter().enumerate() {
                out[j] = out[j].add_uc(&v.mul_uc(&xp));
            }
            xp = xp.mul_uc(x0);
        }
        out
    };
    let p_at0 = eval_x(&Scalar::zero(field));
    let p_at1 = eval_x(&Scalar::one(field));
    if p_at1.iter().all(|c| c.is_zero()) {
        // (x - z) divides the core; strip and recurse.
        let xz = Form::var(field, 0).sub(&Form::var(field, 2))?;
        if let Some(rest) = core.div_exact(&xz) {
            push(xz, &mut found);
            for f in linear_factors(&rest)? {
                push(f, &mut found);
            }
            return Ok(found);
        }
    }
    let t_roots = univariate_roots(field, &p_at0);
    let u_roots = univariate_roots(field, &p_at1);
    for t in &t_roots {
        for u in &u_roots {
            // Line through (x=0, y=t) and (x=1, y=u): y - (u-t)x - t z.
            let s = u.sub_uc(t);
            let cand = Form::var(field, 1)
                .sub(&Form::var(field, 0).scale(&s)?)?
                .sub(&Form::var(field, 2).scale(t)?)?;
            if divides(&cand, &core)? {
                push(cand, &mut found);
            }
        }
    }
    // Candidates of shape x - r*z (no y): roots of p(x, 0).
    let q0: Vec<Scalar> = {
        let mut out = vec![Scalar::zero(field); p.coeffs.len()];
        for (i, c) in p.coeffs.iter().enumerate() {
            out[i] = c.coeffs.first().cloned().unwrap_or_else(|| Scalar::zero(field));
        }
        out
    };
    for r in univariate_roots(field, &q0) {
        let cand = Form::var(field, 0).sub(&Form::var(field, 2).scale(&r)?)?;
        if divides(&cand, &core)? {
            push(cand, &mut found);
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// canonical printing
// ---------------------------------------------------------------------------

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = is_negative(c);
            let abs = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = mono_string(*m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn mono_string(m: Mono) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("x", m.0), ("y", m.1), ("z", m.2)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}
