//! Flattening ranks, the partition-rank-one boundary and compression of
//! tensors with partition rank at least two down to `2 × ⋯ × 2`.

use std::fmt;

use rand_chacha::ChaCha8Rng;

use crate::algebra::{mat_rank, FieldElement, FieldSpec, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::sampling::{random_matrix, random_scalar, rng};
use crate::tensor::{identity_maps, FactorSet, MapTuple, Tensor};

/// Search budgets for the genericity arguments.
#[derive(Debug, Clone)]
pub struct GenericityConfig {
    /// Random image elements tried before any deterministic fallback.
    pub random_attempts: usize,
    /// Starting integer bound over `Q`; doubles every few attempts.
    pub initial_bound: i64,
    /// Largest deterministic grid over `Q` or projective space over `F_p`
    /// that will be enumerated.
    pub enumeration_ceiling: u128,
    /// Random restriction attempts in [`generic_compress`].
    pub compress_attempts: usize,
}

impl Default for GenericityConfig {
    fn default() -> Self {
        GenericityConfig { random_attempts: 64, initial_bound: 8, enumeration_ceiling: 1 << 20, compress_attempts: 32 }
    }
}

impl GenericityConfig {
    fn bound(&self, attempt: usize) -> i64 {
        self.initial_bound.saturating_mul(1i64 << (attempt / 4).min(40))
    }
}

/// Ranks of the canonical flattenings of an order-k tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSignature {
    order: usize,
    entries: Vec<(FactorSet, usize)>,
}

impl RankSignature {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[(FactorSet, usize)] {
        &self.entries
    }

    /// Rank of the `I`-flattening, for any nonempty proper `I`.
    pub fn rank(&self, subset: FactorSet) -> usize {
        let c = subset.canonical(self.order);
        self.entries.iter().find(|(s, _)| *s == c).map(|(_, r)| *r).expect("proper subset")
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, r)| *r).collect()
    }

    pub fn min_rank(&self) -> usize {
        self.entries.iter().map(|(_, r)| *r).min().unwrap_or(0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &RankSignature) -> bool {
        self.order == other.order && self.entries.iter().zip(&other.entries).all(|((_, a), (_, b))| a <= b)
    }
}

impl fmt::Display for RankSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(s, r)| format!("{s}:{r}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn rank_signature<E: FieldElement>(t: &Tensor<E>) -> Result<RankSignature> {
    let k = t.order();
    if k < 2 {
        return Err(Error::InvalidDims(format!("rank signature needs order ≥ 2 (got {k})")));
    }
    let entries = FactorSet::canonical_subsets(k)
        .into_iter()
        .map(|s| Ok((s, mat_rank(&t.flatten(s)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankSignature { order: k, entries })
}

/// Some `I` with `rk(T_I) ≤ 1`, if there is one.
pub fn has_rank_one_flattening<E: FieldElement>(t: &Tensor<E>) -> Result<Option<FactorSet>> {
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let k = t.order();
    if k < 2 {
        return Err(Error::InvalidDims(format!("flattenings need order ≥ 2 (got {k})")));
    }
    for s in FactorSet::canonical_subsets(k) {
        if mat_rank(&t.flatten(s)?) <= 1 {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// An element `S = T_p(v)` of the image of the `p`-flattening with `pR(S) ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageWitness {
    pub factor: usize,
    /// The functional `v` on factor `p`, one coefficient per slice.
    pub coeffs: Vec<Scalar>,
    pub element: Tensor<Scalar>,
    /// A slice index whose slice is independent of `element`.
    pub independent_slice: usize,
}

/// Slice indices along `p` whose slices form a basis of `im(T_p)`.
fn image_basis<E: FieldElement>(t: &Tensor<E>, p: usize) -> Vec<usize> {
    let flat = t.flatten(FactorSet::from_factors(&[p])).expect("proper singleton for order ≥ 2");
    let mut basis = Vec::new();
    let mut rows: Vec<Vec<E>> = Vec::new();
    for i in 0..flat.rows() {
        rows.push(flat.row(i).to_vec());
        let m = Matrix::from_rows(t.field(), rows.clone()).expect("equal row lengths");
        if mat_rank(&m) > basis.len() {
            basis.push(i);
        } else {
            rows.pop();
        }
    }
    basis
}

/// Whether a generic linear combination of `mats` has rank at least two,
/// i.e. whether some 2×2 minor of `Σ c_i M_i` is a nonzero quadratic form in
/// the `c_i`. This is a polynomial identity, so it is field-independent.
fn generic_rank_at_least_two<E: FieldElement>(mats: &[Matrix<E>]) -> bool {
    let (rows, cols) = mats[0].shape();
    for r in 0..rows {
        for r2 in r + 1..rows {
            for s in 0..cols {
                for s2 in s + 1..cols {
                    let a: Vec<&E> = mats.iter().map(|m| m.get(r, s)).collect();
                    let b: Vec<&E> = mats.iter().map(|m| m.get(r2, s2)).collect();
                    let c: Vec<&E> = mats.iter().map(|m| m.get(r, s2)).collect();
                    let d: Vec<&E> = mats.iter().map(|m| m.get(r2, s)).collect();
                    for i in 0..mats.len() {
                        if !a[i].mul(b[i]).sub(&c[i].mul(d[i])).is_zero() {
                            return true;
                        }
                        for j in i + 1..mats.len() {
                            let q = a[i].mul(b[j]).add(&a[j].mul(b[i])).sub(&c[i].mul(d[j])).sub(&c[j].mul(d[i]));
                            if !q.is_zero() {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// Whether a generic element of `im(T_p)` has all flattening ranks ≥ 2.
fn generic_image_pr2<E: FieldElement>(t: &Tensor<E>, p: usize, basis: &[usize]) -> bool {
    let slices: Vec<Tensor<E>> = basis.iter().map(|&i| t.slice(p, i)).collect();
    let order = t.order() - 1;
    FactorSet::canonical_subsets(order).into_iter().all(|j| {
        let mats: Vec<Matrix<E>> = slices.iter().map(|s| s.flatten(j).expect("proper subset")).collect();
        generic_rank_at_least_two(&mats)
    })
}

/// The two conditions of the recursive characterization at factor `p`:
/// `rk(T_p) ≥ 2`, and the image contains an element of partition rank ≥ 2
/// (over the algebraic closure, where it is decided for a generic element).
pub fn pr_conditions_at<E: FieldElement>(t: &Tensor<E>, p: usize) -> Result<bool> {
    let k = t.order();
    if k < 3 {
        return Err(Error::InvalidDims(format!("the image criterion needs order ≥ 3 (got {k})")));
    }
    if p >= k {
        return Err(Error::InvalidSubset(format!("factor {p} out of range for order {k}")));
    }
    let basis = image_basis(t, p);
    Ok(basis.len() >= 2 && generic_image_pr2(t, p, &basis))
}

/// Whether `pR(T) ≥ 2`. Matrices are tested by rank; for `k ≥ 3` the
/// conditions are checked at the last factor. Partition rank one is a
/// flattening-rank condition, so the answer does not depend on passing to the
/// algebraic closure.
pub fn pr_at_least_two_exact<E: FieldElement>(t: &Tensor<E>) -> Result<bool> {
    let k = t.order();
    if k < 2 {
        return Err(Error::InvalidDims(format!("partition rank needs order ≥ 2 (got {k})")));
    }
    if t.is_zero() {
        return Ok(false);
    }
    if k == 2 {
        return Ok(mat_rank(&t.flatten(FactorSet::from_factors(&[0]))?) >= 2);
    }
    pr_conditions_at(t, k - 1)
}

/// Seeded entry point. The decision itself is exact; the seed only matters to
/// [`pr_witness`], which this forwards to when a ground-field element is
/// requested.
pub fn pr_at_least_two(t: &Tensor<Scalar>, _seed: u64) -> Result<bool> {
    pr_at_least_two_exact(t)
}

/// Searches `im(T_p)` over the ground field for an element with `pR ≥ 2`.
///
/// Over `Q` random integer combinations come first, then the grid
/// `{0..D}^d` with `D` twice the number of flattenings of the image, where a
/// nonvanishing point is guaranteed. Over `F_p` the projective image is
/// enumerated when small enough and sampled otherwise. `Ok(None)` means no
/// such element exists over the ground field.
pub fn find_image_witness(t: &Tensor<Scalar>, p: usize, seed: u64, cfg: &GenericityConfig) -> Result<Option<ImageWitness>> {
    let k = t.order();
    if k < 3 {
        return Err(Error::InvalidDims(format!("the image criterion needs order ≥ 3 (got {k})")));
    }
    let basis = image_basis(t, p);
    if basis.len() < 2 || !generic_image_pr2(t, p, &basis) {
        return Ok(None);
    }
    let field = t.field();
    let slices: Vec<Tensor<Scalar>> = (0..t.dims()[p]).map(|i| t.slice(p, i)).collect();
    let d = basis.len();

    let try_coeffs = |c: &[Scalar]| -> Result<Option<ImageWitness>> {
        if c.iter().all(|x| x.is_zero()) {
            return Ok(None);
        }
        let mut coeffs = vec![Scalar::zero(field); slices.len()];
        let mut element = slices[0].scale(&Scalar::zero(field));
        for (ci, &bi) in c.iter().zip(&basis) {
            coeffs[bi] = ci.clone();
            element = element.add(&slices[bi].scale(ci))?;
        }
        if !pr_at_least_two_exact(&element)? {
            return Ok(None);
        }
        let flat_s = element.data().to_vec();
        let independent_slice = (0..slices.len())
            .find(|&i| {
                let m = Matrix::from_rows(field, vec![flat_s.clone(), slices[i].data().to_vec()]).unwrap();
                mat_rank(&m) == 2
            })
            .expect("image has dimension at least two");
        Ok(Some(ImageWitness { factor: p, coeffs, element, independent_slice }))
    };

    let mut r = rng(seed ^ (p as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match field {
        FieldSpec::Rational => {
            for attempt in 0..cfg.random_attempts {
                let c: Vec<Scalar> = (0..d).map(|_| random_scalar(&mut r, field, cfg.bound(attempt))).collect();
                if let Some(w) = try_coeffs(&c)? {
                    return Ok(Some(w));
                }
            }
            let deg = 2 * FactorSet::canonical_subsets(k - 1).len() as u64;
            let side = deg + 1;
            let size = (side as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
            if size > cfg.enumeration_ceiling {
                return Err(Error::InconclusiveGenericity { attempts: cfg.random_attempts });
            }
            for code in 0..size {
                let c = digits(code, side, d).into_iter().map(|x| Scalar::from_i64(x as i64, field)).collect::<Vec<_>>();
                if let Some(w) = try_coeffs(&c)? {
                    return Ok(Some(w));
                }
            }
            Err(Error::Inconsistency("generic image element not found on a grid where one must exist".into()))
        }
        FieldSpec::Prime(q) => {
            let count = projective_count(q, d);
            if count <= cfg.enumeration_ceiling {
                for lead in 0..d {
                    let free = d - lead - 1;
                    let tail = (q as u128).pow(free as u32);
                    for code in 0..tail {
                        let mut c = vec![Scalar::zero(field); d];
                        c[lead] = Scalar::one(field);
                        for (slot, x) in c[lead + 1..].iter_mut().zip(digits(code, q, free)) {
                            *slot = Scalar::residue(x, q);
                        }
                        if let Some(w) = try_coeffs(&c)? {
                            return Ok(Some(w));
                        }
                    }
                }
                return Ok(None);
            }
            for _ in 0..cfg.random_attempts {
                let c: Vec<Scalar> = (0..d).map(|_| random_scalar(&mut r, field, 0)).collect();
                if let Some(w) = try_coeffs(&c)? {
                    return Ok(Some(w));
                }
            }
            Err(Error::InconclusiveGenericity { attempts: cfg.random_attempts })
        }
    }
}

/// Finds a ground-field image witness, trying the last factor first and then
/// the others. `Ok(None)` when `pR(T) ≤ 1` or, over a small field, when no
/// factor's image has a ground-field element of partition rank ≥ 2.
pub fn pr_witness(t: &Tensor<Scalar>, seed: u64, cfg: &GenericityConfig) -> Result<Option<ImageWitness>> {
    let k = t.order();
    if k < 3 {
        return Err(Error::InvalidDims(format!("the image criterion needs order ≥ 3 (got {k})")));
    }
    if !pr_at_least_two_exact(t)? {
        return Ok(None);
    }
    let order: Vec<usize> = std::iter::once(k - 1).chain(0..k - 1).collect();
    for p in order {
        if let Some(w) = find_image_witness(t, p, seed, cfg)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn projective_count(q: u64, d: usize) -> u128 {
    let q = q as u128;
    (0..d as u32).try_fold(0u128, |acc, i| acc.checked_add(q.checked_pow(i)?)).unwrap_or(u128::MAX)
}

/// Base-`b` digits of `code`, least significant first, padded to `len`.
fn digits(mut code: u128, b: u64, len: usize) -> Vec<u64> {
    let b = b as u128;
    (0..len)
        .map(|_| {
            let x = (code % b) as u64;
            code /= b;
            x
        })
        .collect()
}

/// Restricts `T` to `2 × ⋯ × 2` keeping `pR ≥ 2`.
///
/// Random maps are tried first (factors already of dimension 2 keep the
/// identity). If the budget runs out, each factor is compressed in turn onto
/// the span of an image witness and an independent slice, which preserves
/// `pR ≥ 2` over any field.
pub fn generic_compress(t: &Tensor<Scalar>, seed: u64) -> Result<(MapTuple<Scalar>, Tensor<Scalar>)> {
    generic_compress_with(t, seed, &GenericityConfig::default())
}

pub fn generic_compress_with(
    t: &Tensor<Scalar>,
    seed: u64,
    cfg: &GenericityConfig,
) -> Result<(MapTuple<Scalar>, Tensor<Scalar>)> {
    let k = t.order();
    if k < 2 || !pr_at_least_two_exact(t)? {
        return Err(Error::Precondition("compression needs a tensor with partition rank at least two".into()));
    }
    if t.dims().iter().all(|&n| n == 2) {
        return Ok((identity_maps(t), t.clone()));
    }
    let field = t.field();
    let mut r: ChaCha8Rng = rng(seed);
    for attempt in 0..cfg.compress_attempts {
        let maps = random_maps(&mut r, t, cfg.bound(attempt));
        let out = t.restrict(&maps)?;
        if pr_at_least_two_exact(&out)? {
            return Ok((maps, out));
        }
    }
    if k == 2 {
        return Err(Error::BudgetExhausted { attempts: cfg.compress_attempts });
    }
    let mut maps = identity_maps(t);
    let mut cur = t.clone();
    for j in 0..k {
        if cur.dims()[j] == 2 {
            continue;
        }
        let w = find_image_witness(&cur, j, seed.wrapping_add(j as u64), cfg)?
            .ok_or(Error::BudgetExhausted { attempts: cfg.compress_attempts })?;
        let n = cur.dims()[j];
        let mut second = vec![Scalar::zero(field); n];
        second[w.independent_slice] = Scalar::one(field);
        let pi = Matrix::from_rows(field, vec![w.coeffs, second])?;
        let mut step = identity_maps(&cur);
        step[j] = pi.clone();
        cur = cur.restrict(&step)?;
        maps[j] = pi.matmul(&maps[j])?;
    }
    debug_assert!(pr_at_least_two_exact(&cur)?);
    Ok((maps, cur))
}

fn random_maps(r: &mut ChaCha8Rng, t: &Tensor<Scalar>, bound: i64) -> MapTuple<Scalar> {
    let field = t.field();
    t.dims()
        .iter()
        .map(|&n| if n == 2 { Matrix::identity(field, 2) } else { random_matrix(r, field, 2, n, bound) })
        .collect()
}
