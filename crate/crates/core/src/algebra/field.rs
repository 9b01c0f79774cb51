use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::{gaussian_rank, Matrix};
use crate::error::{Error, Result};

/// Largest supported prime modulus. Residues and their products stay inside
/// `u64` arithmetic.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// Coefficient field of a tensor: the rationals or a word-sized prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Validated constructor for `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn ensure_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: *self, right: *other })
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `F_p` and `Fp`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let digits = s
            .strip_prefix("F_")
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in field `{s}`")))?;
        FieldSpec::prime(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Operations shared by every coefficient type the tensor code is generic
/// over: base scalars and rational functions in ε.
///
/// Arithmetic between elements of different fields is a programming error and
/// panics; every public constructor that assembles values validates fields and
/// reports [`Error::FieldMismatch`] instead.
pub trait FieldElement: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(field: FieldSpec) -> Self;
    fn one(field: FieldSpec) -> Self;
    fn field(&self) -> FieldSpec;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_scalar(s: &Scalar) -> Self;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.field())
    }

    fn from_i64(v: i64, field: FieldSpec) -> Self {
        Self::from_scalar(&Scalar::from_i64(v, field))
    }

    /// Exact rank of a matrix over this field.
    fn matrix_rank(m: &Matrix<Self>) -> usize {
        gaussian_rank(m)
    }
}

/// An element of `Q` or `F_p`. Rationals are kept in lowest terms with a
/// positive denominator, residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn from_i64(v: i64, field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Prime { residue: v.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn residue(v: u64, p: u64) -> Self {
        Scalar::Prime { residue: v % p, modulus: p }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    /// Parses the textual form for the given field: `a/b` or `a` over `Q`,
    /// a (possibly negative) integer over `F_p`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let t = text.trim();
        match field {
            FieldSpec::Rational => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{t}`")))?;
                let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{t}`")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{t}`")));
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let v: BigInt = t.parse().map_err(|_| Error::Parse(format!("bad residue `{t}`")))?;
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                let r: u64 = r.try_into().expect("residue below modulus");
                Ok(Scalar::Prime { residue: r, modulus: p })
            }
        }
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                (&n * &n == *r.numer() && &d * &d == *r.denom())
                    .then(|| Scalar::Rational(BigRational::new(n, d)))
            }
            Scalar::Prime { residue, modulus } => {
                sqrt_mod(*residue, *modulus).map(|s| Scalar::Prime { residue: s, modulus: *modulus })
            }
        }
    }

    fn check_pair(&self, rhs: &Scalar) {
        if self.field() != rhs.field() {
            panic!("field mismatch: {} vs {}", self.field(), rhs.field());
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Tonelli–Shanks, with the trivial cases for `p = 2` and zero.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

impl FieldElement for Scalar {
    fn zero(field: FieldSpec) -> Self {
        Scalar::from_i64(0, field)
    }

    fn one(field: FieldSpec) -> Self {
        Scalar::from_i64(1, field)
    }

    fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self.check_pair(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { residue: a, modulus }, Scalar::Prime { residue: b, .. }) => {
                Scalar::Prime { residue: (a + b) % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.check_pair(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { residue: a, modulus }, Scalar::Prime { residue: b, .. }) => {
                Scalar::Prime { residue: mul_mod(*a, *b, *modulus), modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => {
                Scalar::Prime { residue: (modulus - residue) % modulus, modulus: *modulus }
            }
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { residue, modulus } => {
                Scalar::Prime { residue: pow_mod(*residue, modulus - 2, *modulus), modulus: *modulus }
            }
        })
    }

    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }

    fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_one(),
            Scalar::Prime { residue, modulus } => *residue == 1 % modulus,
        }
    }

    fn matrix_rank(m: &Matrix<Self>) -> usize {
        match m.field() {
            FieldSpec::Rational => crate::algebra::matrix::bareiss_rank(m),
            FieldSpec::Prime(_) => gaussian_rank(m),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}
