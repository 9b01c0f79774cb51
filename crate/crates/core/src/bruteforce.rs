//! Exhaustive restriction search over prime fields.
//!
//! Maps are enumerated on every factor except the largest one; the remaining
//! map is then determined by a linear system. Maps whose rank is below the
//! matching flattening rank of the target cannot appear in a witness and are
//! skipped.

use rayon::prelude::*;

use crate::algebra::{mat_rank, mat_solve, FieldElement, FieldSpec, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::tensor::{unit_tensor, FactorSet, MapTuple, Tensor};

/// Default bound on enumerated candidate tuples.
pub const DEFAULT_CEILING: u128 = 1 << 30;

/// Whether `T` restricts to `I_{k,r}`.
pub fn subrank_bruteforce(t: &Tensor<Scalar>, r: usize) -> Result<bool> {
    subrank_bruteforce_with(t, r, DEFAULT_CEILING)
}

pub fn subrank_bruteforce_with(t: &Tensor<Scalar>, r: usize, ceiling: u128) -> Result<bool> {
    if r == 0 {
        return Ok(true);
    }
    let target = unit_tensor(t.order(), r, t.field())?;
    Ok(restricts_to_bruteforce_with(t, &target, ceiling)?.is_some())
}

/// The largest `r ≤ min n_j` with `subrank_bruteforce(T, r)`.
pub fn subrank_exact(t: &Tensor<Scalar>, ceiling: u128) -> Result<usize> {
    let max = t.dims().iter().copied().min().unwrap_or(0);
    let mut best = 0;
    for r in 1..=max {
        if subrank_bruteforce_with(t, r, ceiling)? {
            best = r;
        } else {
            break;
        }
    }
    Ok(best)
}

pub fn restricts_to_bruteforce(t: &Tensor<Scalar>, s: &Tensor<Scalar>) -> Result<Option<MapTuple<Scalar>>> {
    restricts_to_bruteforce_with(t, s, DEFAULT_CEILING)
}

/// A witness `π` with `restrict(T, π) = S`, or `None`. The witness is the
/// first one in enumeration order, independent of thread count.
pub fn restricts_to_bruteforce_with(
    t: &Tensor<Scalar>,
    s: &Tensor<Scalar>,
    ceiling: u128,
) -> Result<Option<MapTuple<Scalar>>> {
    t.field().ensure_same(&s.field())?;
    let FieldSpec::Prime(q) = t.field() else {
        return Err(Error::UnsupportedField("exhaustive search needs a prime field".into()));
    };
    let k = t.order();
    if s.order() != k {
        return Err(Error::DimensionMismatch(format!("orders {} and {}", k, s.order())));
    }
    let field = t.field();
    if s.is_zero() {
        return Ok(Some(zero_maps(field, s.dims(), t.dims())));
    }
    if k == 1 {
        return solve_last(t, s, &[], 0).map(|m| m.map(|m| vec![m]));
    }

    let solved = (0..k).max_by_key(|&j| (t.dims()[j], j)).unwrap();
    let target_ranks: Vec<usize> =
        (0..k).map(|j| mat_rank(&s.flatten(FactorSet::from_factors(&[j])).expect("order ≥ 2"))).collect();

    let enumerated: Vec<usize> = (0..k).filter(|&j| j != solved).collect();
    let mut total: u128 = 1;
    for &j in &enumerated {
        let entries = (s.dims()[j] * t.dims()[j]) as u32;
        let per = (q as u128).checked_pow(entries).unwrap_or(u128::MAX);
        total = total.saturating_mul(per);
    }
    if total > ceiling {
        return Err(Error::SearchSpaceTooLarge { size: total, ceiling });
    }

    let mut choices: Vec<Vec<Matrix<Scalar>>> = Vec::with_capacity(enumerated.len());
    for &j in &enumerated {
        let list = all_matrices(q, s.dims()[j], t.dims()[j], target_ranks[j]);
        if list.is_empty() {
            return Ok(None);
        }
        choices.push(list);
    }
    let count: u64 = choices.iter().map(|c| c.len() as u64).product();

    let found = (0..count).into_par_iter().find_map_first(|code| {
        let mut rest = code;
        let mut partial: Vec<Matrix<Scalar>> = Vec::with_capacity(enumerated.len());
        for c in choices.iter().rev() {
            partial.push(c[(rest % c.len() as u64) as usize].clone());
            rest /= c.len() as u64;
        }
        partial.reverse();
        match solve_last(t, s, &partial, solved) {
            Ok(Some(last)) => {
                let mut maps = Vec::with_capacity(k);
                let mut it = partial.into_iter();
                for j in 0..k {
                    maps.push(if j == solved { last.clone() } else { it.next().unwrap() });
                }
                Some(maps)
            }
            _ => None,
        }
    });
    if let Some(maps) = &found {
        debug_assert_eq!(&t.restrict(maps).unwrap(), s);
    }
    Ok(found)
}

/// Given maps on every factor but `solved` (in factor order), finds the map on
/// `solved` completing a restriction to `S`.
fn solve_last(
    t: &Tensor<Scalar>,
    s: &Tensor<Scalar>,
    partial: &[Matrix<Scalar>],
    solved: usize,
) -> Result<Option<Matrix<Scalar>>> {
    let k = t.order();
    let field = t.field();
    let mut cur = t.clone();
    let mut it = partial.iter();
    for j in 0..k {
        if j != solved {
            cur = cur.mode_product(j, it.next().unwrap())?;
        }
    }
    // cur_(solved) is n × M; need π · cur = S_(solved), so cur^T · row^T = S-row^T
    let (a, b) = if k == 1 {
        let a = Matrix::new(field, 1, cur.len(), cur.data().to_vec())?;
        let b = Matrix::new(field, 1, s.len(), s.data().to_vec())?;
        (a, b)
    } else {
        let sub = FactorSet::from_factors(&[solved]);
        (cur.flatten(sub)?, s.flatten(sub)?)
    };
    let at = a.transpose();
    let mut rows = Vec::with_capacity(b.rows());
    for r in 0..b.rows() {
        match mat_solve(&at, b.row(r))? {
            Some(x) => rows.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_rows(field, rows)?))
}

/// Every `rows × cols` matrix over `F_q` of rank at least `min_rank`.
fn all_matrices(q: u64, rows: usize, cols: usize, min_rank: usize) -> Vec<Matrix<Scalar>> {
    let field = FieldSpec::Prime(q);
    let n = rows * cols;
    let total = q.pow(n as u32);
    (0..total)
        .filter_map(|mut code| {
            let data: Vec<Scalar> = (0..n)
                .map(|_| {
                    let x = code % q;
                    code /= q;
                    Scalar::residue(x, q)
                })
                .collect();
            let m = Matrix::new(field, rows, cols, data).unwrap();
            (min_rank == 0 || m.rank() >= min_rank).then_some(m)
        })
        .collect()
}

fn zero_maps(field: FieldSpec, target: &[usize], source: &[usize]) -> MapTuple<Scalar> {
    target.iter().zip(source).map(|(&m, &n)| Matrix::zeros(field, m, n)).collect()
}

/// A witness that `T` restricts to `e_0 ⊗ ⋯ ⊗ e_0`, built from a nonzero entry.
pub fn rank_one_witness<E: FieldElement>(t: &Tensor<E>) -> Option<MapTuple<E>> {
    let (idx, v) = t.support().into_iter().next()?;
    let field = t.field();
    let inv = v.inv()?;
    Some(
        idx.iter()
            .zip(t.dims())
            .enumerate()
            .map(|(j, (&i, &n))| {
                let mut m = Matrix::zeros(field, 1, n);
                m.set(0, i, if j == 0 { inv.clone() } else { E::one(field) });
                m
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::w_tensor_2;

    const F2: FieldSpec = FieldSpec::Prime(2);

    #[test]
    fn subrank_examples() {
        let i32 = unit_tensor::<Scalar>(3, 2, F2).unwrap();
        assert!(subrank_bruteforce(&i32, 2).unwrap());
        let w3 = w_tensor_2::<Scalar>(3, F2);
        assert!(!subrank_bruteforce(&w3, 2).unwrap());
        assert!(subrank_bruteforce(&w3, 1).unwrap());
        assert_eq!(subrank_exact(&i32, DEFAULT_CEILING).unwrap(), 2);
    }

    #[test]
    fn restriction_examples() {
        let i32 = unit_tensor::<Scalar>(3, 2, F2).unwrap();
        let w3 = w_tensor_2::<Scalar>(3, F2);
        assert!(restricts_to_bruteforce(&i32, &w3).unwrap().is_none());
        let z = Tensor::zeros(F2, vec![2, 2, 2]).unwrap();
        let maps = restricts_to_bruteforce(&w3, &z).unwrap().unwrap();
        assert_eq!(w3.restrict(&maps).unwrap(), z);
        let e = Tensor::indicator(F2, vec![1, 1, 1], &[vec![0, 0, 0]]).unwrap();
        let maps = restricts_to_bruteforce(&w3, &e).unwrap().unwrap();
        assert_eq!(w3.restrict(&maps).unwrap(), e);
    }

    #[test]
    fn rejects_rationals_and_large_spaces() {
        let w3 = w_tensor_2::<Scalar>(3, FieldSpec::Rational);
        assert!(matches!(subrank_bruteforce(&w3, 2), Err(Error::UnsupportedField(_))));
        let big = unit_tensor::<Scalar>(3, 4, F2).unwrap();
        assert!(matches!(subrank_bruteforce_with(&big, 4, 1 << 10), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn rank_one_witness_restricts() {
        let w3 = w_tensor_2::<Scalar>(3, FieldSpec::Prime(5)).scale(&Scalar::residue(3, 5));
        let maps = rank_one_witness(&w3).unwrap();
        assert_eq!(w3.restrict(&maps).unwrap(), unit_tensor(3, 1, FieldSpec::Prime(5)).unwrap());
    }
}
