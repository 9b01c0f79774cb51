//! Explicit curves witnessing `T ⊵ W_k` for any `T` over `Q` with `pR(T) ≥ 2`.

use crate::algebra::{mat_solve, FieldElement, FieldSpec, Matrix, RatFunc, Scalar};
use crate::degeneration::certificate::{
    identity_curves, rf_const, verify_certificate, DegenerationCertificate, Rescaling, Verdict,
};
use crate::degeneration::stabilizer::stab_shear;
use crate::error::{Error, Result};
use crate::invariants::{find_image_witness, generic_compress, pr_at_least_two_exact, GenericityConfig};
use crate::tensor::{w_tensor_2, Tensor};

/// How the stabilizer step made the `v_{0…0}` coefficient of `P` nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilizerCase {
    /// `P_{0…0} ≠ 0` already; only the scaling curve is used.
    Scaling,
    /// A shear with these parameters (summing to zero) came first.
    Shear(Vec<Scalar>),
}

/// Intermediate data of one inductive step, for auditing.
#[derive(Debug, Clone)]
pub struct StepAudit {
    pub order: usize,
    /// `(S, S′)` spanning the image of the last flattening.
    pub e_t: (Tensor<Scalar>, Tensor<Scalar>),
    /// Curves with `g_ε · S = W_{k−1} + O(ε)`.
    pub inner: Vec<Matrix<RatFunc>>,
    /// `(W_{k−1}, P)`.
    pub w_p: (Tensor<Scalar>, Tensor<Scalar>),
    pub case: StabilizerCase,
    /// Curves on factors `0..k−1` in the stabilizer step.
    pub stabilizer: Vec<Matrix<RatFunc>>,
    /// Power `N` substituted into the first-stage curves.
    pub substitution: usize,
    /// Certificate `S ⊗ e₀ + S′ ⊗ e₁ ⊵ W_{k−1} ⊗ e₀ + P ⊗ e₁`.
    pub first: DegenerationCertificate,
    /// Certificate `W_{k−1} ⊗ e₀ + P ⊗ e₁ ⊵ W_k`.
    pub second: DegenerationCertificate,
}

/// Largest shear entry tried before giving up.
const SHEAR_LIMIT: i64 = 64;

/// A certificate `T ⊵ W_k` that [`verify_certificate`] accepts, with the
/// compression recorded separately.
pub fn construct_w_degeneration(t: &Tensor<Scalar>, seed: u64) -> Result<DegenerationCertificate> {
    construct_w_degeneration_traced(t, seed).map(|(c, _)| c)
}

/// [`construct_w_degeneration`] together with the audit of every inductive
/// step, outermost first.
pub fn construct_w_degeneration_traced(
    t: &Tensor<Scalar>,
    seed: u64,
) -> Result<(DegenerationCertificate, Vec<StepAudit>)> {
    if t.field() != FieldSpec::Rational {
        return Err(Error::UnsupportedField(format!(
            "certificates are constructed over Q only (got {}); small fields lack the generic elements the construction needs",
            t.field()
        )));
    }
    let k = t.order();
    if k < 2 || !pr_at_least_two_exact(t)? {
        return Err(Error::Precondition("the tensor must have partition rank at least two".into()));
    }
    let (maps, compressed) = generic_compress(t, seed)?;
    let already_small = t.dims().iter().all(|&n| n == 2);
    let mut audits = Vec::new();
    let mut rescalings = Vec::new();
    let curves = build(&compressed, seed, &mut audits, &mut rescalings)?;
    let cert = DegenerationCertificate {
        field: t.field(),
        source: t.clone(),
        compression: (!already_small).then_some(maps),
        target: w_tensor_2(k, t.field()),
        curves,
        rescalings,
    };
    match verify_certificate(&cert) {
        Verdict::Accept => Ok((cert, audits)),
        v => Err(Error::Inconsistency(format!("constructed certificate rejected: {v}"))),
    }
}

fn build(
    t: &Tensor<Scalar>,
    seed: u64,
    audits: &mut Vec<StepAudit>,
    rescalings: &mut Vec<Rescaling>,
) -> Result<Vec<Matrix<RatFunc>>> {
    let field = t.field();
    let k = t.order();
    let w = w_tensor_2::<Scalar>(k, field);
    if *t == w {
        return Ok(identity_curves(field, t.dims()));
    }
    if k == 2 {
        let m = t.flatten(crate::tensor::FactorSet::from_factors(&[0]))?;
        let inv = m.inverse().ok_or_else(|| Error::Inconsistency("rank-deficient base case".into()))?;
        let w2 = w.flatten(crate::tensor::FactorSet::from_factors(&[0]))?;
        return Ok(vec![w2.matmul(&inv)?.map(rf_const), Matrix::identity(field, 2)]);
    }

    // change basis on the last factor so the slices are (S, S′) with pR(S) ≥ 2
    let wit = find_image_witness(t, k - 1, seed, &GenericityConfig::default())?
        .ok_or_else(|| Error::Inconsistency("no image element of partition rank two over Q".into()))?;
    let mut second = vec![Scalar::zero(field); 2];
    second[wit.independent_slice] = Scalar::one(field);
    let basis = Matrix::from_rows(field, vec![wit.coeffs.clone(), second])?;
    let mut maps = crate::tensor::identity_maps(t);
    maps[k - 1] = basis.clone();
    let tt = t.restrict(&maps)?;
    let s = tt.slice(k - 1, 0);
    let s2 = tt.slice(k - 1, 1);

    let inner_start = audits.len();
    let g = build(&s, seed.wrapping_add(1), audits, rescalings)?;
    let a = s.to_ratfunc().restrict(&g)?;
    let b = s2.to_ratfunc().restrict(&g)?;

    // reduce g·S′ against g·S until its leading term leaves the line of W
    let w_small = w_tensor_2::<Scalar>(k - 1, field);
    let mut y = b.clone();
    let p = loop {
        let v = min_valuation(&y).ok_or_else(|| Error::Inconsistency("g·S′ collapsed into g·S".into()))?;
        y = y.map(|f| f.shift(-v));
        let lead = y.map(|f| f.coeff_at(0));
        match proportional_to(&lead, &w_small) {
            Some(c) => y = y.sub(&a.scale(&RatFunc::constant(c)))?,
            None => break lead,
        }
    };

    // x_ε: coordinates of (g·S, y) in the basis (g·S, g·S′)
    let cols: Vec<Vec<RatFunc>> = (0..a.len()).map(|i| vec![a.data()[i].clone(), b.data()[i].clone()]).collect();
    let system = Matrix::from_rows(field, cols)?;
    let mut x_rows = Vec::with_capacity(2);
    for target in [&a, &y] {
        let sol = mat_solve(&system, target.data())?
            .ok_or_else(|| Error::Inconsistency("image-matching system has no solution".into()))?;
        x_rows.push(sol);
    }
    let x = Matrix::from_rows(field, x_rows)?;

    // stabilizer step on P
    let kp = k - 1;
    let zero_idx = vec![0; kp];
    let (case, shears, p_tilde) = if !p.get(&zero_idx).is_zero() {
        (StabilizerCase::Scaling, vec![Matrix::<Scalar>::identity(field, 2); kp], p.clone())
    } else {
        let s = find_shear(&p)?;
        let shears = stab_shear(&s)?;
        let pt = p.restrict(&shears)?;
        (StabilizerCase::Shear(s), shears, pt)
    };
    let p0 = p_tilde.get(&zero_idx).clone();
    let one = Scalar::one(field);
    let h = Matrix::diagonal(field, vec![RatFunc::monomial(one.clone(), -1), RatFunc::monomial(one.clone(), kp as i64 - 1)]);
    let stab: Vec<Matrix<RatFunc>> = shears.iter().map(|sh| h.matmul(&sh.map(rf_const))).collect::<Result<_>>()?;
    let p0_inv = p0.inv().expect("nonzero corner");
    let x2 = Matrix::diagonal(field, vec![RatFunc::one(field), RatFunc::monomial(p0_inv.clone(), kp as i64)]);
    rescalings.push(Rescaling {
        factor: k - 1,
        exponent: kp as i64,
        scalar: p0_inv,
        note: format!("order-{k} step: second slice scaled by ε^{kp}/P₀"),
    });

    let poles: i64 = stab.iter().chain(std::iter::once(&x2)).map(|m| -min_entry_valuation(m).min(0)).sum();
    let n = 1 + poles as usize;

    let mut curves = Vec::with_capacity(k);
    for (hj, gj) in stab.iter().zip(&g) {
        curves.push(hj.matmul(&gj.map(|f| f.substitute_power(n)))?);
    }
    let last = x2.matmul(&x.map(|f| f.substitute_power(n)))?.matmul(&basis.map(rf_const))?;
    curves.push(last);

    let t_hat = Tensor::stack_last(&[w_small.clone(), p.clone()])?;
    let mut first_curves = g.clone();
    first_curves.push(x.matmul(&basis.map(rf_const))?);
    let mut second_curves = stab.clone();
    second_curves.push(x2);
    let audit = StepAudit {
        order: k,
        e_t: (s, s2),
        inner: g,
        w_p: (w_small, p),
        case,
        stabilizer: stab,
        substitution: n,
        first: DegenerationCertificate::new(t.clone(), t_hat.clone(), first_curves),
        second: DegenerationCertificate::new(t_hat, w, second_curves),
    };
    audits.insert(inner_start, audit);
    Ok(curves)
}

fn min_valuation(t: &Tensor<RatFunc>) -> Option<i64> {
    t.data().iter().filter_map(|f| f.valuation().finite()).min()
}

fn min_entry_valuation(m: &Matrix<RatFunc>) -> i64 {
    m.data().iter().filter_map(|f| f.valuation().finite()).min().unwrap_or(0)
}

/// `Some(c)` with `a = c·w` (`c` possibly zero), `None` when independent.
fn proportional_to(a: &Tensor<Scalar>, w: &Tensor<Scalar>) -> Option<Scalar> {
    let i = w.data().iter().position(|x| !x.is_zero())?;
    let c = a.data()[i].div(&w.data()[i])?;
    a.data().iter().zip(w.data()).all(|(x, y)| *x == c.mul(y)).then_some(c)
}

/// Integer `s` with `Σ s = 0` making the `v_{0…0}` coefficient of
/// `h(s)·P` nonzero.
fn find_shear(p: &Tensor<Scalar>) -> Result<Vec<Scalar>> {
    let field = p.field();
    let kp = p.order();
    let zero_idx = vec![0; kp];
    for d in 1..=SHEAR_LIMIT {
        let side = (2 * d + 1) as u64;
        let total = side.pow(kp as u32 - 1);
        for code in 0..total {
            let mut c = code;
            let mut s: Vec<i64> = (0..kp - 1)
                .map(|_| {
                    let x = (c % side) as i64 - d;
                    c /= side;
                    x
                })
                .collect();
            s.push(-s.iter().sum::<i64>());
            let s: Vec<Scalar> = s.into_iter().map(|x| Scalar::from_i64(x, field)).collect();
            let shears = stab_shear(&s)?;
            if !p.restrict(&shears)?.get(&zero_idx).is_zero() {
                return Ok(s);
            }
        }
    }
    Err(Error::Inconsistency("no shear in the stabilizer moves P off the corner".into()))
}
