//! Two-planes in a tensor space, through their Plücker coordinates.

use crate::algebra::{FieldElement, Matrix, RatFunc, Scalar, Valuation};
use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Coordinates of `S ∧ S′` indexed by pairs `a < b` of flat entry offsets, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgePoint<E> {
    pub ambient_dim: usize,
    pub coords: Vec<E>,
}

impl<E: FieldElement> WedgePoint<E> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Nonzero coordinates as `((a, b), value)`.
    pub fn support(&self) -> Vec<((usize, usize), &E)> {
        let n = self.ambient_dim;
        let mut out = Vec::new();
        let mut i = 0;
        for a in 0..n {
            for b in a + 1..n {
                if !self.coords[i].is_zero() {
                    out.push(((a, b), &self.coords[i]));
                }
                i += 1;
            }
        }
        out
    }
}

pub fn pluecker_wedge<E: FieldElement>(s: &Tensor<E>, s2: &Tensor<E>) -> Result<WedgePoint<E>> {
    s.field().ensure_same(&s2.field())?;
    if s.dims() != s2.dims() {
        return Err(Error::DimensionMismatch(format!("dims {:?} vs {:?}", s.dims(), s2.dims())));
    }
    let (x, y) = (s.data(), s2.data());
    let n = x.len();
    let mut coords = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            coords.push(x[a].mul(&y[b]).sub(&x[b].mul(&y[a])));
        }
    }
    Ok(WedgePoint { ambient_dim: n, coords })
}

/// Whether the span `E_S` is a limit of `g_ε · E_T` in the Grassmannian: the
/// wedge of the transported pair, divided by its lowest ε-power, must tend to
/// a nonzero multiple of the wedge of `E_S`.
pub fn grassmann_degenerates(
    curves: &[Matrix<RatFunc>],
    e_t: (&Tensor<Scalar>, &Tensor<Scalar>),
    e_s: (&Tensor<Scalar>, &Tensor<Scalar>),
) -> Result<bool> {
    let ws = pluecker_wedge(e_s.0, e_s.1)?;
    if ws.is_zero() {
        return Err(Error::DegenerateSpan("target pair is linearly dependent".into()));
    }
    if pluecker_wedge(e_t.0, e_t.1)?.is_zero() {
        return Err(Error::DegenerateSpan("source pair is linearly dependent".into()));
    }
    let a = e_t.0.to_ratfunc().restrict(curves)?;
    let b = e_t.1.to_ratfunc().restrict(curves)?;
    if a.dims() != e_s.0.dims() {
        return Err(Error::DimensionMismatch(format!("transported dims {:?} vs {:?}", a.dims(), e_s.0.dims())));
    }
    let wt = pluecker_wedge(&a, &b)?;
    let Some(v) = wt.coords.iter().filter_map(|c| c.valuation().finite()).min() else {
        return Ok(false);
    };
    let lead: Vec<Scalar> = wt.coords.iter().map(|c| if c.valuation() == Valuation::Finite(v) { c.coeff_at(v) } else { Scalar::zero(c.field()) }).collect();
    let i = ws.coords.iter().position(|c| !c.is_zero()).expect("nonzero wedge");
    let Some(lambda) = lead[i].div(&ws.coords[i]) else { return Ok(false) };
    if lambda.is_zero() {
        return Ok(false);
    }
    Ok(lead.iter().zip(&ws.coords).all(|(l, w)| *l == lambda.mul(w)))
}
