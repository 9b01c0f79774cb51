use std::fmt;

use crate::algebra::{FieldElement, FieldSpec, Matrix, RatFunc, Scalar, Valuation};
use crate::error::{Error, Result};
use crate::tensor::{MapTuple, Tensor};

/// An ε-normalization folded into one curve factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rescaling {
    pub factor: usize,
    pub exponent: i64,
    pub scalar: Scalar,
    pub note: String,
}

/// Curves `g_ε = (A₁(ε), …, A_k(ε))` with `g_ε · T' = S + O(ε)`, where `T'` is
/// the source after the optional compression maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationCertificate {
    pub field: FieldSpec,
    pub source: Tensor<Scalar>,
    /// Maps from the source to the tensor the curves act on; `None` means the
    /// curves act on the source directly.
    pub compression: Option<MapTuple<Scalar>>,
    pub target: Tensor<Scalar>,
    pub curves: Vec<Matrix<RatFunc>>,
    pub rescalings: Vec<Rescaling>,
}

impl DegenerationCertificate {
    pub fn new(source: Tensor<Scalar>, target: Tensor<Scalar>, curves: Vec<Matrix<RatFunc>>) -> Self {
        DegenerationCertificate {
            field: source.field(),
            source,
            compression: None,
            target,
            curves,
            rescalings: Vec::new(),
        }
    }

    /// The tensor the curves act on.
    pub fn compressed_source(&self) -> Result<Tensor<Scalar>> {
        match &self.compression {
            Some(maps) => self.source.restrict(maps),
            None => Ok(self.source.clone()),
        }
    }

    /// Curves composed with the compression maps, acting on the original source.
    pub fn composed_curves(&self) -> Result<Vec<Matrix<RatFunc>>> {
        match &self.compression {
            None => Ok(self.curves.clone()),
            Some(maps) => self.curves.iter().zip(maps).map(|(c, m)| c.matmul(&m.map(rf_const))).collect(),
        }
    }
}

pub(crate) fn rf_const(s: &Scalar) -> RatFunc {
    RatFunc::constant(s.clone())
}

/// Laurent data of `g_ε · T'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub image: Tensor<RatFunc>,
    /// Valuation of each entry, in storage order.
    pub valuations: Vec<Valuation>,
    /// `min(0, smallest finite valuation)`.
    pub min_exponent: i64,
    /// `layers[i]` holds the coefficients of `ε^(min_exponent + i)`, up to ε⁰.
    pub layers: Vec<Tensor<Scalar>>,
}

impl Expansion {
    /// Coefficient tensor of `ε^exp` for `min_exponent ≤ exp ≤ 0`.
    pub fn coefficient(&self, exp: i64) -> Option<&Tensor<Scalar>> {
        if exp > 0 || exp < self.min_exponent {
            return None;
        }
        self.layers.get((exp - self.min_exponent) as usize)
    }

    pub fn constant_term(&self) -> &Tensor<Scalar> {
        self.layers.last().expect("ε⁰ layer always present")
    }
}

/// Applies curves to a tensor over K(ε) and expands every entry at ε = 0.
pub fn expand(t: &Tensor<Scalar>, curves: &[Matrix<RatFunc>]) -> Result<Expansion> {
    let image = t.to_ratfunc().restrict(curves)?;
    let valuations: Vec<Valuation> = image.data().iter().map(|f| f.valuation()).collect();
    let min_exponent = valuations.iter().filter_map(|v| v.finite()).min().unwrap_or(0).min(0);
    let field = t.field();
    let layers = (min_exponent..=0)
        .map(|e| {
            let data = image.data().iter().map(|f| f.coeff_at(e)).collect();
            Tensor::new(field, image.dims().to_vec(), data)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Expansion { image, valuations, min_exponent, layers })
}

fn check_curves(curves: &[Matrix<RatFunc>]) -> Result<()> {
    for (j, c) in curves.iter().enumerate() {
        if !c.is_square() || c.determinant().is_none_or(|d| d.is_zero()) {
            return Err(Error::SingularCurve { factor: j });
        }
    }
    Ok(())
}

/// `restrict(T', g_ε)` with its Laurent expansion.
pub fn apply_certificate(cert: &DegenerationCertificate) -> Result<Expansion> {
    check_curves(&cert.curves)?;
    expand(&cert.compressed_source()?, &cert.curves)
}

/// Which of the three acceptance conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCondition {
    SingularCurve,
    NegativeValuation,
    WrongLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { condition: FailedCondition, entry: Option<Vec<usize>>, message: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "accept"),
            Verdict::Reject { condition, entry, message } => {
                let n = match condition {
                    FailedCondition::SingularCurve => 1,
                    FailedCondition::NegativeValuation => 2,
                    FailedCondition::WrongLimit => 3,
                };
                write!(f, "reject (condition {n}): {message}")?;
                if let Some(e) = entry {
                    write!(f, " at entry {e:?}")?;
                }
                Ok(())
            }
        }
    }
}

/// Accepts iff every curve is invertible over K(ε), the image has no poles,
/// and its value at ε = 0 is exactly the target.
pub fn verify_certificate(cert: &DegenerationCertificate) -> Verdict {
    for (j, c) in cert.curves.iter().enumerate() {
        if !c.is_square() || c.determinant().is_none_or(|d| d.is_zero()) {
            return Verdict::Reject {
                condition: FailedCondition::SingularCurve,
                entry: None,
                message: format!("curve {j} is not invertible"),
            };
        }
    }
    match cert.compressed_source() {
        Ok(t) => verify_on(&t, &cert.curves, &cert.target),
        Err(e) => reject_limit(None, format!("compression does not apply: {e}")),
    }
}

/// The same check with the compression maps folded into the curves and the
/// original source as input.
pub fn verify_composed(cert: &DegenerationCertificate) -> Verdict {
    for (j, c) in cert.curves.iter().enumerate() {
        if !c.is_square() || c.determinant().is_none_or(|d| d.is_zero()) {
            return Verdict::Reject {
                condition: FailedCondition::SingularCurve,
                entry: None,
                message: format!("curve {j} is not invertible"),
            };
        }
    }
    match cert.composed_curves() {
        Ok(curves) => verify_on(&cert.source, &curves, &cert.target),
        Err(e) => reject_limit(None, format!("compression does not compose: {e}")),
    }
}

fn reject_limit(entry: Option<Vec<usize>>, message: String) -> Verdict {
    Verdict::Reject { condition: FailedCondition::WrongLimit, entry, message }
}

fn verify_on(t: &Tensor<Scalar>, curves: &[Matrix<RatFunc>], target: &Tensor<Scalar>) -> Verdict {
    if curves.len() != t.order() || target.order() != t.order() {
        return reject_limit(None, "source, target and curves disagree on the order".into());
    }
    let ex = match expand(t, curves) {
        Ok(ex) => ex,
        Err(e) => return reject_limit(None, format!("curves do not apply: {e}")),
    };
    if let Some(off) = ex.valuations.iter().position(|v| *v < Valuation::Finite(0)) {
        return Verdict::Reject {
            condition: FailedCondition::NegativeValuation,
            entry: Some(ex.image.index_of(off)),
            message: format!("entry has valuation {:?}", ex.valuations[off]),
        };
    }
    let limit = ex.constant_term();
    if limit.dims() != target.dims() {
        return reject_limit(None, format!("limit has dims {:?}, target {:?}", limit.dims(), target.dims()));
    }
    if let Some(off) = (0..limit.len()).find(|&i| limit.data()[i] != target.data()[i]) {
        return reject_limit(
            Some(limit.index_of(off)),
            format!("limit entry {} differs from target {}", limit.data()[off], target.data()[off]),
        );
    }
    Verdict::Accept
}

pub fn identity_curves(field: FieldSpec, dims: &[usize]) -> Vec<Matrix<RatFunc>> {
    dims.iter().map(|&n| Matrix::identity(field, n)).collect()
}

/// `I_{k,2} ⊵ W_k` via `ε⁻¹((e₀ + εe₁)^{⊗k} − e₀^{⊗k})`.
pub fn unit_to_w_certificate(k: usize) -> Result<DegenerationCertificate> {
    unit_to_w_certificate_over(k, FieldSpec::Rational)
}

pub fn unit_to_w_certificate_over(k: usize, field: FieldSpec) -> Result<DegenerationCertificate> {
    if k < 2 {
        return Err(Error::InvalidDims(format!("needs k ≥ 2 (got {k})")));
    }
    let one = RatFunc::one(field);
    let zero = RatFunc::zero(field);
    let eps = RatFunc::epsilon(field);
    let inv_eps = eps.inv().unwrap();
    // columns are the images of e₀ and e₁
    let first = Matrix::from_rows(field, vec![vec![inv_eps.neg(), inv_eps.clone()], vec![zero.clone(), one.clone()]])?;
    let rest = Matrix::from_rows(field, vec![vec![one.clone(), one], vec![zero, eps]])?;
    let mut curves = vec![first];
    curves.extend(std::iter::repeat_n(rest, k - 1));
    let source = crate::tensor::unit_tensor(k, 2, field)?;
    let target = crate::tensor::w_tensor_2(k, field);
    Ok(DegenerationCertificate::new(source, target, curves))
}
