//! Curves in the stabilizer of `W_k`.

use crate::algebra::{FieldElement, FieldSpec, Matrix, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::tensor::MapTuple;

/// `h_ε = diag(ε⁻¹, ε^{k−1})` together with the prefactor `ε^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingCurve {
    pub k: usize,
    pub h: Matrix<RatFunc>,
    pub prefactor: RatFunc,
}

impl ScalingCurve {
    /// `h_ε` on every factor with the prefactor folded into factor 0; it
    /// scales `v_{i₁…i_k}` by `ε^{k(i₁+⋯+i_k)}`.
    pub fn assembled(&self) -> Vec<Matrix<RatFunc>> {
        let mut curves = vec![self.h.clone(); self.k];
        curves[0] = self.h.map(|f| f.mul(&self.prefactor));
        curves
    }
}

pub fn stab_scaling_curve(k: usize) -> Result<ScalingCurve> {
    stab_scaling_curve_over(k, FieldSpec::Rational)
}

pub fn stab_scaling_curve_over(k: usize, field: FieldSpec) -> Result<ScalingCurve> {
    if k < 2 {
        return Err(Error::InvalidDims(format!("needs k ≥ 2 (got {k})")));
    }
    let one = Scalar::one(field);
    let h = Matrix::diagonal(
        field,
        vec![RatFunc::monomial(one.clone(), -1), RatFunc::monomial(one.clone(), k as i64 - 1)],
    );
    Ok(ScalingCurve { k, h, prefactor: RatFunc::monomial(one, k as i64) })
}

/// `([[1, s_j], [0, 1]])_j`, which fixes `W_k` when `Σ s_j = 0`.
pub fn stab_shear(s: &[Scalar]) -> Result<MapTuple<Scalar>> {
    let field = s.first().map(|x| x.field()).ok_or_else(|| Error::InvalidDims("empty shear".into()))?;
    let sum = s.iter().try_fold(Scalar::zero(field), |acc, x| {
        field.ensure_same(&x.field())?;
        Ok::<_, Error>(acc.add(x))
    })?;
    if !sum.is_zero() {
        return Err(Error::ShearSumNonzero);
    }
    Ok(s.iter()
        .map(|x| {
            Matrix::from_rows(field, vec![vec![Scalar::one(field), x.clone()], vec![Scalar::zero(field), Scalar::one(field)]])
                .expect("2×2")
        })
        .collect())
}
