//! Exact field scalars: arbitrary-precision rationals and odd prime fields.
//!
//! Every value carries its field descriptor.  Aggregates (forms, matrices)
//! check descriptor agreement at construction; mixing two fields is reported
//! as an error, never coerced.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Field descriptor.  `Fp(p)` requires an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn check_modulus(p: u64) -> Result<Field> {
        if p < 3 || p >= (1 << 31) || p % 2 == 0 || !is_prime(p) {
            return Err(Error::Scalar(format!("{p} is not an odd prime below 2^31")));
        }
        Ok(Field::Fp(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { v: 1, p },
        }
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { v: m, p }
            }
        }
    }

    pub fn from_ratio(field: Field, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Scalar("zero denominator".into()));
        }
        let n = Scalar::from_i64(field, num);
        let d = Scalar::from_i64(field, den);
        n.div(&d)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn join(&self, other: &Scalar) -> Result<Field> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(a)
        } else {
            Err(Error::MixedFields(format!("{a} vs {b}")))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.join(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: (a + b) % p, p: *p },
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.join(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { v: (a + p - b) % p, p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.join(other)?;
        Ok(match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp { v: a * b % p, p: *p },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Scalar("division by zero".into()));
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: mod_inv(*v, *p), p: *p },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.mul(&other.inv()?)
    }

    /// Reduce a rational scalar modulo `p`.  Fails when `p` divides the
    /// denominator.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Fp { .. } => Err(Error::Scalar("already a prime-field value".into())),
            Scalar::Q(r) => {
                let num = bigint_mod(r.numer(), p);
                let den = bigint_mod(r.denom(), p);
                if den == 0 {
                    return Err(Error::Scalar(format!("denominator divisible by {p}")));
                }
                Ok(Scalar::Fp { v: num * mod_inv(den, p) % p, p })
            }
        }
    }

    /// Size proxy used for pivot selection over Q (any nonzero is fine over F_p).
    pub fn bit_size(&self) -> u64 {
        match self {
            Scalar::Q(r) => r.numer().bits() + r.denom().bits(),
            Scalar::Fp { .. } => 1,
        }
    }

    pub fn to_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            _ => None,
        }
    }

    // Unchecked variants for inner loops that operate on field-validated
    // aggregates.  A descriptor mismatch here is a bug, not an input error.
    pub(crate) fn add_uc(&self, other: &Scalar) -> Scalar {
        self.add(other).expect("field-validated aggregate")
    }

    pub(crate) fn sub_uc(&self, other: &Scalar) -> Scalar {
        self.sub(other).expect("field-validated aggregate")
    }

    pub(crate) fn mul_uc(&self, other: &Scalar) -> Scalar {
        self.mul(other).expect("field-validated aggregate")
    }

    pub(crate) fn div_uc(&self, other: &Scalar) -> Scalar {
        self.div(other).expect("field-validated aggregate")
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let (sign, digits) = m.to_u64_digits();
    let v = digits.first().copied().unwrap_or(0);
    match sign {
        Sign::Minus => (p - v) % p,
        _ => v % p,
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

/// True when the rational scalar is negative (used by the printer).
pub fn is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Q(r) => r.is_negative(),
        Scalar::Fp { .. } => false,
    }
}
