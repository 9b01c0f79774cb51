use std::fmt;

use crate::algebra::field::{FieldElement, FieldSpec, Scalar};
use crate::algebra::poly::Poly;

/// Order of vanishing at ε = 0. `Infinity` is the valuation of zero and
/// compares above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

/// Element of K(ε): `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Laurent coefficients `coeffs[i]` of ε^(start + i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    pub start: i64,
    pub coeffs: Vec<Scalar>,
}

impl LaurentSeries {
    pub fn coeff(&self, exp: i64, field: FieldSpec) -> Scalar {
        if exp < self.start {
            return Scalar::zero(field);
        }
        self.coeffs.get((exp - self.start) as usize).cloned().unwrap_or_else(|| Scalar::zero(field))
    }
}

impl RatFunc {
    /// Builds and normalizes `num / den`. Panics when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        assert_eq!(num.field(), den.field(), "field mismatch in rational function");
        if num.is_zero() {
            return RatFunc { den: Poly::constant(Scalar::one(num.field())), num };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead_inv = den.leading().unwrap().inv().unwrap();
        RatFunc { num: num.scale(&lead_inv), den: den.scale(&lead_inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field();
        RatFunc { num: p, den: Poly::constant(Scalar::one(field)) }
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `c · ε^n` for any integer `n`.
    pub fn monomial(c: Scalar, n: i64) -> Self {
        let field = c.field();
        if n >= 0 {
            RatFunc::from_poly(Poly::monomial(c, n as usize))
        } else {
            RatFunc::new(Poly::constant(c), Poly::monomial(Scalar::one(field), (-n) as usize))
        }
    }

    /// The indeterminate ε.
    pub fn epsilon(field: FieldSpec) -> Self {
        RatFunc::monomial(Scalar::one(field), 1)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn valuation(&self) -> Valuation {
        match self.num.valuation() {
            None => Valuation::Infinity,
            Some(a) => Valuation::Finite(a as i64 - self.den.valuation().unwrap() as i64),
        }
    }

    /// Exact Laurent coefficients from the valuation up to ε^upto. Empty for
    /// zero or when `upto` lies below the valuation.
    pub fn series(&self, upto: i64) -> LaurentSeries {
        let Valuation::Finite(v) = self.valuation() else {
            return LaurentSeries { start: 0, coeffs: Vec::new() };
        };
        if upto < v {
            return LaurentSeries { start: v, coeffs: Vec::new() };
        }
        let num = self.num.unshift(self.num.valuation().unwrap());
        let den = self.den.unshift(self.den.valuation().unwrap());
        let d0_inv = den.coeff(0).inv().expect("shifted denominator has a unit constant term");
        let count = (upto - v + 1) as usize;
        let mut out: Vec<Scalar> = Vec::with_capacity(count);
        for n in 0..count {
            let mut acc = num.coeff(n);
            for i in 1..=n.min(den.coeffs().len().saturating_sub(1)) {
                acc = acc.sub(&den.coeff(i).mul(&out[n - i]));
            }
            out.push(acc.mul(&d0_inv));
        }
        LaurentSeries { start: v, coeffs: out }
    }

    /// Coefficient of ε^exp in the Laurent expansion at 0.
    pub fn coeff_at(&self, exp: i64) -> Scalar {
        self.series(exp).coeff(exp, self.field())
    }

    /// Value at ε = 0; `None` when there is a pole.
    pub fn at_zero(&self) -> Option<Scalar> {
        match self.valuation() {
            Valuation::Infinity => Some(Scalar::zero(self.field())),
            Valuation::Finite(v) if v < 0 => None,
            Valuation::Finite(_) => Some(self.coeff_at(0)),
        }
    }

    /// Substitutes ε ↦ ε^n.
    pub fn substitute_power(&self, n: usize) -> Self {
        // the substitution is injective on K[ε], so coprimality and monicity survive
        RatFunc { num: self.num.substitute_power(n), den: self.den.substitute_power(n) }
    }

    /// Multiplies by ε^n.
    pub fn shift(&self, n: i64) -> Self {
        self.mul(&RatFunc::monomial(Scalar::one(self.field()), n))
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }
}

impl FieldElement for RatFunc {
    fn zero(field: FieldSpec) -> Self {
        RatFunc::from_poly(Poly::zero(field))
    }

    fn one(field: FieldSpec) -> Self {
        RatFunc::constant(Scalar::one(field))
    }

    fn field(&self) -> FieldSpec {
        self.num.field()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(self.num.add(&rhs.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.degree() == Some(0) && rhs.den.degree() == Some(0) {
            return RatFunc { num: self.num.mul(&rhs.num), den: self.den.clone() };
        }
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| RatFunc::new(self.den.clone(), self.num.clone()))
    }

    fn from_scalar(s: &Scalar) -> Self {
        RatFunc::constant(s.clone())
    }
}

impl fmt::Display for RatFunc {
    /// `num ; den`, each as comma-separated coefficients from ε⁰.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.num, self.den)
    }
}
