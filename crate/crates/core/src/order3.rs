//! Order-3 classification: the Cayley hyperdeterminant, the seven orbits of
//! `K² ⊗ K² ⊗ K²`, and the trichotomy for tensors of arbitrary dimensions.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{mat_rank, mat_solve, FieldElement, FieldSpec, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::gap::{class_constant, AsymptoticClass, GapClass};
use crate::invariants::{generic_compress_with, has_rank_one_flattening, GenericityConfig, rank_signature, RankSignature};
use crate::tensor::{compose_maps, unit_tensor, FactorSet, MapTuple, Tensor};

/// Orbit of a 2×2×2 tensor, matching the seven normal forms
/// `0`, `e₀e₀e₀`, `e₀e₀e₀ + e₀e₁e₁`, `e₀e₀e₀ + e₁e₀e₁`, `e₀e₀e₀ + e₁e₁e₀`,
/// `W₃` and `I₃,₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbit222 {
    Zero,
    Rank1,
    Pencil1x2,
    Pencil2x1,
    Pencil2x2Split,
    WClass,
    UnitClass,
}

impl Orbit222 {
    pub const ALL: [Orbit222; 7] = [
        Orbit222::Zero,
        Orbit222::Rank1,
        Orbit222::Pencil1x2,
        Orbit222::Pencil2x1,
        Orbit222::Pencil2x2Split,
        Orbit222::WClass,
        Orbit222::UnitClass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Orbit222::Zero => "Zero",
            Orbit222::Rank1 => "Rank1",
            Orbit222::Pencil1x2 => "Pencil1x2",
            Orbit222::Pencil2x1 => "Pencil2x1",
            Orbit222::Pencil2x2Split => "Pencil2x2Split",
            Orbit222::WClass => "WClass",
            Orbit222::UnitClass => "UnitClass",
        }
    }

    /// The asymptotic subrank class of every tensor in this orbit, except
    /// `Zero`, which has none.
    pub fn asymptotic_class(&self) -> Option<AsymptoticClass> {
        match self {
            Orbit222::Zero => None,
            Orbit222::WClass => Some(AsymptoticClass::C3),
            Orbit222::UnitClass => Some(AsymptoticClass::AtLeastTwo),
            _ => Some(AsymptoticClass::One),
        }
    }

    /// Normal form of the orbit.
    pub fn representative<E: FieldElement>(&self, field: FieldSpec) -> Tensor<E> {
        let support: &[[usize; 3]] = match self {
            Orbit222::Zero => &[],
            Orbit222::Rank1 => &[[0, 0, 0]],
            Orbit222::Pencil1x2 => &[[0, 0, 0], [0, 1, 1]],
            Orbit222::Pencil2x1 => &[[0, 0, 0], [1, 0, 1]],
            Orbit222::Pencil2x2Split => &[[0, 0, 0], [1, 1, 0]],
            Orbit222::WClass => &[[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            Orbit222::UnitClass => &[[0, 0, 0], [1, 1, 1]],
        };
        let s: Vec<Vec<usize>> = support.iter().map(|i| i.to_vec()).collect();
        Tensor::indicator(field, vec![2, 2, 2], &s).expect("valid support")
    }
}

impl fmt::Display for Orbit222 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orbit222 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Orbit222::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown orbit label `{s}`")))
    }
}

fn check_222<E: FieldElement>(t: &Tensor<E>) -> Result<()> {
    if t.dims() != [2, 2, 2] {
        return Err(Error::InvalidDims(format!("expected dims (2,2,2), got {:?}", t.dims())));
    }
    Ok(())
}

/// The degree-four Cayley hyperdeterminant of a 2×2×2 tensor.
pub fn cayley_hyperdet<E: FieldElement>(t: &Tensor<E>) -> Result<E> {
    check_222(t)?;
    let f = t.field();
    let x = |i: usize, j: usize, k: usize| t.get(&[i, j, k]).clone();
    let c = |v: i64| E::from_i64(v, f);
    let m = |coef: i64, fs: [E; 4]| fs.iter().fold(c(coef), |acc, v| acc.mul(v));
    let terms = [
        m(1, [x(0, 1, 1), x(0, 1, 1), x(1, 0, 0), x(1, 0, 0)]),
        m(-2, [x(0, 1, 0), x(0, 1, 1), x(1, 0, 0), x(1, 0, 1)]),
        m(1, [x(0, 1, 0), x(0, 1, 0), x(1, 0, 1), x(1, 0, 1)]),
        m(-2, [x(0, 0, 1), x(0, 1, 1), x(1, 0, 0), x(1, 1, 0)]),
        m(-2, [x(0, 0, 1), x(0, 1, 0), x(1, 0, 1), x(1, 1, 0)]),
        m(4, [x(0, 0, 0), x(0, 1, 1), x(1, 0, 1), x(1, 1, 0)]),
        m(1, [x(0, 0, 1), x(0, 0, 1), x(1, 1, 0), x(1, 1, 0)]),
        m(4, [x(0, 0, 1), x(0, 1, 0), x(1, 0, 0), x(1, 1, 1)]),
        m(-2, [x(0, 0, 0), x(0, 1, 1), x(1, 0, 0), x(1, 1, 1)]),
        m(-2, [x(0, 0, 0), x(0, 1, 0), x(1, 0, 1), x(1, 1, 1)]),
        m(-2, [x(0, 0, 0), x(0, 0, 1), x(1, 1, 0), x(1, 1, 1)]),
        m(1, [x(0, 0, 0), x(0, 0, 0), x(1, 1, 1), x(1, 1, 1)]),
    ];
    Ok(terms.iter().fold(E::zero(f), |acc, v| acc.add(v)))
}

/// Single-factor flattening ranks `(rk T₀, rk T₁, rk T₂)` of an order-3 tensor.
pub fn factor_ranks<E: FieldElement>(t: &Tensor<E>) -> Result<[usize; 3]> {
    if t.order() != 3 {
        return Err(Error::InvalidDims(format!("expected order 3, got {}", t.order())));
    }
    let r = |j| t.flatten(FactorSet::from_factors(&[j])).map(|m| mat_rank(&m));
    Ok([r(0)?, r(1)?, r(2)?])
}

/// The orbit of a 2×2×2 tensor, read off from its flattening ranks and
/// whether the hyperdeterminant vanishes.
pub fn classify_222<E: FieldElement>(t: &Tensor<E>) -> Result<Orbit222> {
    check_222(t)?;
    let ranks = factor_ranks(t)?;
    Ok(match ranks {
        [0, 0, 0] => Orbit222::Zero,
        [1, 1, 1] => Orbit222::Rank1,
        [1, 2, 2] => Orbit222::Pencil1x2,
        [2, 1, 2] => Orbit222::Pencil2x1,
        [2, 2, 1] => Orbit222::Pencil2x2Split,
        [2, 2, 2] if cayley_hyperdet(t)?.is_zero() => Orbit222::WClass,
        [2, 2, 2] => Orbit222::UnitClass,
        other => return Err(Error::Inconsistency(format!("impossible flattening ranks {other:?}"))),
    })
}

/// `rk(T_j) ≤ 2` for every single factor `j`.
pub fn multilinear_rank_le_2<E: FieldElement>(t: &Tensor<E>) -> Result<bool> {
    Ok(factor_ranks(t)?.iter().all(|&r| r <= 2))
}

/// Maps `π` over the ground field with `restrict(T, π) = I₃,₂`, for a
/// 2×2×2 tensor with nonzero hyperdeterminant. `None` when the pencil of
/// slices has no two rank-one members over the ground field.
pub fn unit_witness_222(t: &Tensor<Scalar>) -> Result<Option<MapTuple<Scalar>>> {
    check_222(t)?;
    if cayley_hyperdet(t)?.is_zero() {
        return Ok(None);
    }
    let field = t.field();
    let m0 = t.slice(2, 0);
    let m1 = t.slice(2, 1);
    let roots = pencil_roots(&m0, &m1, field);
    if roots.len() < 2 {
        return Ok(None);
    }
    let comb = |(l, m): &(Scalar, Scalar)| m0.scale(l).add(&m1.scale(m)).expect("same shape");
    let r1 = comb(&roots[0]);
    let r2 = comb(&roots[1]);
    let (u1, v1) = split_rank_one(&r1);
    let (u2, v2) = split_rank_one(&r2);

    let basis = Matrix::new(field, 2, 4, r1.data().iter().chain(r2.data()).cloned().collect())?.transpose();
    let Some(a) = mat_solve(&basis, m0.data())? else { return Ok(None) };
    let Some(b) = mat_solve(&basis, m1.data())? else { return Ok(None) };
    let cols = |x: [Scalar; 2], y: [Scalar; 2]| {
        Matrix::from_rows(field, vec![vec![x[0].clone(), y[0].clone()], vec![x[1].clone(), y[1].clone()]])
    };
    let u = cols(u1, u2)?;
    let v = cols(v1, v2)?;
    let w = cols([a[0].clone(), b[0].clone()], [a[1].clone(), b[1].clone()])?;
    let (Some(ui), Some(vi), Some(wi)) = (u.inverse(), v.inverse(), w.inverse()) else {
        return Ok(None);
    };
    let maps = vec![ui, vi, wi];
    let target = unit_tensor(3, 2, field)?;
    Ok((t.restrict(&maps)? == target).then_some(maps))
}

/// Up to two distinct projective roots `(λ : μ)` of `det(λ M₀ + μ M₁)`.
fn pencil_roots(m0: &Tensor<Scalar>, m1: &Tensor<Scalar>, field: FieldSpec) -> Vec<(Scalar, Scalar)> {
    let e = |m: &Tensor<Scalar>, i: usize, j: usize| m.get(&[i, j]).clone();
    let det2 = |a: &Tensor<Scalar>, b: &Tensor<Scalar>| e(a, 0, 0).mul(&e(b, 1, 1)).sub(&e(a, 0, 1).mul(&e(b, 1, 0)));
    // det(λM₀ + μM₁) = a λ² + b λμ + c μ²
    let a = det2(m0, m0);
    let c = det2(m1, m1);
    let b = det2(m0, m1).add(&det2(m1, m0));
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    let eval = |l: &Scalar, m: &Scalar| a.mul(l).mul(l).add(&b.mul(l).mul(m)).add(&c.mul(m).mul(m));

    if let FieldSpec::Prime(p) = field {
        if p <= 1024 {
            let mut out = Vec::new();
            if eval(&one, &zero).is_zero() {
                out.push((one.clone(), zero.clone()));
            }
            for x in 0..p {
                let l = Scalar::residue(x, p);
                if eval(&l, &one).is_zero() {
                    out.push((l, one.clone()));
                }
            }
            out.truncate(2);
            return out;
        }
    }
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        return vec![(one, zero), (c.clone(), b.neg())];
    }
    let disc = b.mul(&b).sub(&Scalar::from_i64(4, field).mul(&a).mul(&c));
    let Some(s) = disc.sqrt() else { return Vec::new() };
    if s.is_zero() {
        return Vec::new();
    }
    let two_a_inv = a.add(&a).inv().expect("odd characteristic");
    let r1 = b.neg().add(&s).mul(&two_a_inv);
    let r2 = b.neg().sub(&s).mul(&two_a_inv);
    vec![(r1, one.clone()), (r2, one)]
}

/// `R = u ⊗ v` for a rank-one 2×2 matrix.
fn split_rank_one(r: &Tensor<Scalar>) -> ([Scalar; 2], [Scalar; 2]) {
    let (idx, pivot) = r.support().into_iter().next().expect("nonzero");
    let (i0, j0) = (idx[0], idx[1]);
    let inv = pivot.inv().unwrap();
    let u = [r.get(&[0, j0]).clone(), r.get(&[1, j0]).clone()];
    let v = [r.get(&[i0, 0]).mul(&inv), r.get(&[i0, 1]).mul(&inv)];
    (u, v)
}

/// Outcome of the order-3 trichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trichotomy {
    FlatteningRankOne,
    WIsomorphic,
    RestrictsToUnit2,
}

impl Trichotomy {
    pub fn name(&self) -> &'static str {
        match self {
            Trichotomy::FlatteningRankOne => "FlatteningRankOne",
            Trichotomy::WIsomorphic => "WIsomorphic",
            Trichotomy::RestrictsToUnit2 => "RestrictsToUnit2",
        }
    }

    pub fn asymptotic_class(&self) -> AsymptoticClass {
        match self {
            Trichotomy::FlatteningRankOne => AsymptoticClass::One,
            Trichotomy::WIsomorphic => AsymptoticClass::C3,
            Trichotomy::RestrictsToUnit2 => AsymptoticClass::AtLeastTwo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    Deterministic,
    Randomized(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub trichotomy: Trichotomy,
    pub rank_signature: RankSignature,
    /// `(seed, Cay)` of each compressed sample, in trial order.
    pub cayley_samples: Vec<(u64, Scalar)>,
    pub asymptotic_class: AsymptoticClass,
    pub constant: GapClass,
    pub confidence: Confidence,
    /// `I` with `rk(T_I) ≤ 1`, for `FlatteningRankOne`.
    pub flattening_witness: Option<FactorSet>,
    /// Maps with `restrict(T, π) = I₃,₂`, for `RestrictsToUnit2`.
    pub unit_witness: Option<MapTuple<Scalar>>,
    /// Set when the unit class was detected but no restriction to `I₃,₂`
    /// exists over the ground field for the compressed sample.
    pub ground_field_witness_missing: bool,
}

/// Per-trial seed used by [`trichotomy`].
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add((trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Classifies a nonzero order-3 tensor as having a rank-one flattening,
/// being in the orbit closure class of `W₃`, or restricting to `I₃,₂`.
pub fn trichotomy(t: &Tensor<Scalar>, seed: u64, trials: usize) -> Result<ClassificationReport> {
    trichotomy_with(t, seed, trials, &GenericityConfig::default())
}

pub fn trichotomy_with(
    t: &Tensor<Scalar>,
    seed: u64,
    trials: usize,
    cfg: &GenericityConfig,
) -> Result<ClassificationReport> {
    if t.order() != 3 {
        return Err(Error::InvalidDims(format!("trichotomy needs order 3, got {}", t.order())));
    }
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let signature = rank_signature(t)?;
    let report = |trichotomy: Trichotomy, confidence, samples, fw, uw, missing| ClassificationReport {
        trichotomy,
        rank_signature: signature.clone(),
        cayley_samples: samples,
        asymptotic_class: trichotomy.asymptotic_class(),
        constant: class_constant(trichotomy.asymptotic_class()),
        confidence,
        flattening_witness: fw,
        unit_witness: uw,
        ground_field_witness_missing: missing,
    };

    if let Some(i) = has_rank_one_flattening(t)? {
        return Ok(report(Trichotomy::FlatteningRankOne, Confidence::Deterministic, Vec::new(), Some(i), None, false));
    }

    let mut samples = Vec::with_capacity(trials);
    for trial in 0..trials {
        let s = trial_seed(seed, trial);
        let (maps, compressed) = generic_compress_with(t, s, cfg)?;
        let cay = cayley_hyperdet(&compressed)?;
        samples.push((s, cay.clone()));
        match classify_222(&compressed)? {
            Orbit222::UnitClass => {
                let witness = unit_witness_222(&compressed)?.map(|w| compose_maps(&w, &maps)).transpose()?;
                let missing = witness.is_none();
                return Ok(report(
                    Trichotomy::RestrictsToUnit2,
                    Confidence::Deterministic,
                    samples,
                    None,
                    witness,
                    missing,
                ));
            }
            Orbit222::WClass => {}
            other => {
                return Err(Error::Inconsistency(format!("compression produced {other}, which has partition rank one")))
            }
        }
    }
    if !multilinear_rank_le_2(t)? {
        return Err(Error::Inconsistency(format!(
            "hyperdeterminant vanished on all {trials} samples but a flattening has rank above 2; retry with another seed"
        )));
    }
    Ok(report(Trichotomy::WIsomorphic, Confidence::Randomized(trials), samples, None, None, false))
}

/// The class and constant for a report.
pub fn gap_class(report: &ClassificationReport) -> GapClass {
    class_constant(report.trichotomy.asymptotic_class())
}
