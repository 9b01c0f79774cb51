//! Dense order-k tensors and the standard constructions on them.
//!
//! Indices are 0-based throughout: the basis vectors usually written e₁, e₂
//! are indices 0 and 1. Entries are stored row-major (last index fastest).

use std::fmt;

use crate::algebra::{FieldElement, FieldSpec, Matrix, RatFunc, Scalar};
use crate::error::{Error, Result};

/// A subset of the factors `{0, …, k−1}` of an order-k tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorSet(u32);

impl FactorSet {
    pub fn from_factors(factors: &[usize]) -> Self {
        FactorSet(factors.iter().fold(0u32, |acc, &f| acc | (1 << f)))
    }

    pub fn from_bits(bits: u32) -> Self {
        FactorSet(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn contains(&self, factor: usize) -> bool {
        self.0 >> factor & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn complement(&self, order: usize) -> Self {
        FactorSet(!self.0 & ((1u32 << order) - 1))
    }

    pub fn factors(&self) -> Vec<usize> {
        (0..32).filter(|&f| self.contains(f)).collect()
    }

    /// True when `self` is nonempty and proper in `{0, …, order−1}`.
    pub fn is_proper(&self, order: usize) -> bool {
        self.0 != 0 && self.0 < (1 << order) - 1
    }

    /// Canonical representative of `{I, Iᶜ}`: the smaller side, and on a tie
    /// the side containing factor 0.
    pub fn canonical(&self, order: usize) -> Self {
        let c = self.complement(order);
        match self.len().cmp(&c.len()) {
            std::cmp::Ordering::Less => *self,
            std::cmp::Ordering::Greater => c,
            std::cmp::Ordering::Equal if self.contains(0) => *self,
            std::cmp::Ordering::Equal => c,
        }
    }

    /// All canonical proper subsets of `{0, …, order−1}`, `2^(order−1) − 1` of
    /// them, ordered by size and then by bit pattern.
    pub fn canonical_subsets(order: usize) -> Vec<FactorSet> {
        let mut out: Vec<FactorSet> = (1..(1u32 << order) - 1)
            .map(FactorSet)
            .filter(|s| s.canonical(order) == *s)
            .collect();
        out.sort_by_key(|s| (s.len(), s.0));
        out
    }
}

impl fmt::Display for FactorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A tuple of linear maps, one per tensor factor; map `j` has shape `m_j × n_j`.
pub type MapTuple<E> = Vec<Matrix<E>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor<E> {
    field: FieldSpec,
    dims: Vec<usize>,
    data: Vec<E>,
}

impl<E: FieldElement> Tensor<E> {
    pub fn new(field: FieldSpec, dims: Vec<usize>, data: Vec<E>) -> Result<Self> {
        check_dims(&dims)?;
        let n: usize = dims.iter().product();
        if data.len() != n {
            return Err(Error::DimensionMismatch(format!("{} entries for dims {:?}", data.len(), dims)));
        }
        for e in &data {
            field.ensure_same(&e.field())?;
        }
        Ok(Tensor { field, dims, data })
    }

    pub fn zeros(field: FieldSpec, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let n = dims.iter().product();
        Ok(Tensor { field, dims, data: vec![E::zero(field); n] })
    }

    /// Sparse constructor; omitted entries are zero, duplicates are rejected.
    pub fn from_entries(field: FieldSpec, dims: Vec<usize>, entries: Vec<(Vec<usize>, E)>) -> Result<Self> {
        let mut t = Tensor::zeros(field, dims)?;
        let mut seen = std::collections::HashSet::new();
        for (idx, v) in entries {
            field.ensure_same(&v.field())?;
            let off = t.offset_checked(&idx)?;
            if !seen.insert(off) {
                return Err(Error::DimensionMismatch(format!("duplicate index {idx:?}")));
            }
            t.data[off] = v;
        }
        Ok(t)
    }

    /// Tensor with entry 1 at each listed index.
    pub fn indicator(field: FieldSpec, dims: Vec<usize>, support: &[Vec<usize>]) -> Result<Self> {
        let mut t = Tensor::zeros(field, dims)?;
        for idx in support {
            let off = t.offset_checked(idx)?;
            t.data[off] = E::one(field);
        }
        Ok(t)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn offset_checked(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dims.len() || idx.iter().zip(&self.dims).any(|(i, n)| i >= n) {
            return Err(Error::DimensionMismatch(format!("index {idx:?} out of range for dims {:?}", self.dims)));
        }
        Ok(self.offset(idx))
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (i, n)| acc * n + i)
    }

    /// Multi-index of a flat offset.
    pub fn index_of(&self, mut off: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (slot, n) in idx.iter_mut().zip(&self.dims).rev() {
            *slot = off % n;
            off /= n;
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &E {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: E) {
        let off = self.offset(idx);
        self.data[off] = v;
    }

    /// Nonzero entries with their indices, in storage order.
    pub fn support(&self) -> Vec<(Vec<usize>, &E)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(off, e)| (self.index_of(off), e))
            .collect()
    }

    pub fn map<F: FieldElement>(&self, f: impl Fn(&E) -> F) -> Tensor<F> {
        Tensor { field: self.field, dims: self.dims.clone(), data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &E) -> Tensor<E> {
        self.map(|e| e.mul(c))
    }

    pub fn add(&self, rhs: &Tensor<E>) -> Result<Tensor<E>> {
        self.check_same_shape(rhs)?;
        Ok(Tensor {
            field: self.field,
            dims: self.dims.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Tensor<E>) -> Result<Tensor<E>> {
        self.add(&rhs.scale(&E::one(self.field).neg()))
    }

    fn check_same_shape(&self, rhs: &Tensor<E>) -> Result<()> {
        self.field.ensure_same(&rhs.field)?;
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch(format!("dims {:?} vs {:?}", self.dims, rhs.dims)));
        }
        Ok(())
    }

    /// Kronecker product; along each factor the combined index is
    /// `i·m + i′` (left factor major).
    pub fn kronecker(&self, rhs: &Tensor<E>) -> Result<Tensor<E>> {
        self.field.ensure_same(&rhs.field)?;
        if self.order() != rhs.order() {
            return Err(Error::DimensionMismatch(format!("orders {} and {}", self.order(), rhs.order())));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&rhs.dims).map(|(a, b)| a * b).collect();
        let mut out = Tensor::zeros(self.field, dims)?;
        for (ia, a) in self.data.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let idx_a = self.index_of(ia);
            for (ib, b) in rhs.data.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let idx_b = rhs.index_of(ib);
                let idx: Vec<usize> =
                    idx_a.iter().zip(&idx_b).zip(&rhs.dims).map(|((i, j), m)| i * m + j).collect();
                out.set(&idx, a.mul(b));
            }
        }
        Ok(out)
    }

    /// The `I`-flattening: rows indexed by the factors in `I` (row-major in
    /// ascending factor order), columns by the complement.
    pub fn flatten(&self, subset: FactorSet) -> Result<Matrix<E>> {
        let k = self.order();
        if !subset.is_proper(k) {
            return Err(Error::InvalidSubset(format!("{subset} is not a nonempty proper subset of {k} factors")));
        }
        let row_f = subset.factors();
        let col_f = subset.complement(k).factors();
        let rows: usize = row_f.iter().map(|&f| self.dims[f]).product();
        let cols: usize = col_f.iter().map(|&f| self.dims[f]).product();
        let mut m = Matrix::zeros(self.field, rows, cols);
        for (off, e) in self.data.iter().enumerate() {
            let idx = self.index_of(off);
            let r = row_f.iter().fold(0, |acc, &f| acc * self.dims[f] + idx[f]);
            let c = col_f.iter().fold(0, |acc, &f| acc * self.dims[f] + idx[f]);
            m.set(r, c, e.clone());
        }
        Ok(m)
    }

    /// Applies `map` (shape `m × n_factor`) along one factor.
    pub fn mode_product(&self, factor: usize, map: &Matrix<E>) -> Result<Tensor<E>> {
        self.field.ensure_same(&map.field())?;
        if factor >= self.order() || map.cols() != self.dims[factor] {
            return Err(Error::DimensionMismatch(format!(
                "map of shape {:?} on factor {factor} of dims {:?}",
                map.shape(),
                self.dims
            )));
        }
        let mut dims = self.dims.clone();
        dims[factor] = map.rows();
        let mut out: Tensor<E> = Tensor::zeros(self.field, dims)?;
        let inner: usize = self.dims[factor + 1..].iter().product();
        let outer: usize = self.dims[..factor].iter().product();
        let n = self.dims[factor];
        let m = map.rows();
        for o in 0..outer {
            for i in 0..n {
                for t in 0..inner {
                    let src = &self.data[(o * n + i) * inner + t];
                    if src.is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        let a = map.get(j, i);
                        if a.is_zero() {
                            continue;
                        }
                        let dst = (o * m + j) * inner + t;
                        out.data[dst] = out.data[dst].add(&a.mul(src));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(π₁ ⊗ ⋯ ⊗ π_k) T`.
    pub fn restrict(&self, maps: &[Matrix<E>]) -> Result<Tensor<E>> {
        if maps.len() != self.order() {
            return Err(Error::DimensionMismatch(format!("{} maps for an order-{} tensor", maps.len(), self.order())));
        }
        let mut t = self.clone();
        for (f, m) in maps.iter().enumerate() {
            t = t.mode_product(f, m)?;
        }
        Ok(t)
    }

    /// The order-(k−1) slice with index `i` fixed along `factor`.
    pub fn slice(&self, factor: usize, i: usize) -> Tensor<E> {
        assert!(self.order() >= 2 && i < self.dims[factor]);
        let mut dims = self.dims.clone();
        dims.remove(factor);
        let mut data = Vec::with_capacity(self.data.len() / self.dims[factor]);
        for (off, e) in self.data.iter().enumerate() {
            if self.index_of(off)[factor] == i {
                data.push(e.clone());
            }
        }
        Tensor { field: self.field, dims, data }
    }

    /// `Σ_c slices[c] ⊗ e_c`, placing the new factor last.
    pub fn stack_last(slices: &[Tensor<E>]) -> Result<Tensor<E>> {
        let first = slices.first().ok_or_else(|| Error::InvalidDims("no slices".into()))?;
        let mut dims = first.dims.clone();
        dims.push(slices.len());
        let mut data = vec![E::zero(first.field); first.len() * slices.len()];
        for (c, s) in slices.iter().enumerate() {
            first.check_same_shape(s)?;
            for (off, e) in s.data.iter().enumerate() {
                data[off * slices.len() + c] = e.clone();
            }
        }
        Tensor::new(first.field, dims, data)
    }

    /// Reorders factors: factor `j` of the result is factor `perm[j]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor<E>> {
        let k = self.order();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidDims(format!("{perm:?} is not a permutation of {k} factors")));
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut out = Tensor::zeros(self.field, dims)?;
        for (off, e) in self.data.iter().enumerate() {
            let idx = self.index_of(off);
            let new_idx: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            out.set(&new_idx, e.clone());
        }
        Ok(out)
    }

    /// Zero-pads into larger dims, keeping entries at the same indices.
    pub fn pad_to(&self, dims: &[usize]) -> Result<Tensor<E>> {
        if dims.len() != self.order() || dims.iter().zip(&self.dims).any(|(a, b)| a < b) {
            return Err(Error::InvalidDims(format!("cannot pad {:?} into {:?}", self.dims, dims)));
        }
        let mut out = Tensor::zeros(self.field, dims.to_vec())?;
        for (off, e) in self.data.iter().enumerate() {
            out.set(&self.index_of(off), e.clone());
        }
        Ok(out)
    }
}

impl Tensor<Scalar> {
    /// Embeds the entries into K(ε) as constants.
    pub fn to_ratfunc(&self) -> Tensor<RatFunc> {
        self.map(|s| RatFunc::constant(s.clone()))
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("a tensor needs at least one factor".into()));
    }
    if dims.len() > 16 {
        return Err(Error::InvalidDims(format!("order {} is too large", dims.len())));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidDims(format!("zero dimension in {dims:?}")));
    }
    Ok(())
}

/// `I_{k,r} = Σ_i e_i ⊗ ⋯ ⊗ e_i` in `(K^r)^{⊗k}`.
pub fn unit_tensor<E: FieldElement>(k: usize, r: usize, field: FieldSpec) -> Result<Tensor<E>> {
    if k < 1 || r < 1 {
        return Err(Error::InvalidDims(format!("unit tensor needs k ≥ 1 and r ≥ 1 (got k={k}, r={r})")));
    }
    let support: Vec<Vec<usize>> = (0..r).map(|i| vec![i; k]).collect();
    Tensor::indicator(field, vec![r; k], &support)
}

/// `W_k`: the 0/1 tensor supported on the k permutations of `(1, 0, …, 0)`.
pub fn w_tensor<E: FieldElement>(k: usize, dims: &[usize], field: FieldSpec) -> Result<Tensor<E>> {
    if dims.len() != k {
        return Err(Error::InvalidDims(format!("W_{k} needs {k} dims, got {}", dims.len())));
    }
    if dims.iter().any(|&n| n < 2) {
        return Err(Error::InvalidDims(format!("all dims of W_{k} must be at least 2 (got {dims:?})")));
    }
    let support: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            let mut idx = vec![0; k];
            idx[j] = 1;
            idx
        })
        .collect();
    Tensor::indicator(field, dims.to_vec(), &support)
}

/// `W_k` in `(K²)^{⊗k}`.
pub fn w_tensor_2<E: FieldElement>(k: usize, field: FieldSpec) -> Tensor<E> {
    w_tensor(k, &vec![2; k], field).expect("valid W dims")
}

pub fn kronecker<E: FieldElement>(t: &Tensor<E>, s: &Tensor<E>) -> Result<Tensor<E>> {
    t.kronecker(s)
}

pub fn flatten<E: FieldElement>(t: &Tensor<E>, subset: FactorSet) -> Result<Matrix<E>> {
    t.flatten(subset)
}

pub fn restrict<E: FieldElement>(t: &Tensor<E>, maps: &[Matrix<E>]) -> Result<Tensor<E>> {
    t.restrict(maps)
}

/// Identity maps for every factor of `t`.
pub fn identity_maps<E: FieldElement>(t: &Tensor<E>) -> MapTuple<E> {
    t.dims().iter().map(|&n| Matrix::identity(t.field(), n)).collect()
}

/// Componentwise products `σ_j · π_j` (apply `π` first).
pub fn compose_maps<E: FieldElement>(outer: &[Matrix<E>], inner: &[Matrix<E>]) -> Result<MapTuple<E>> {
    if outer.len() != inner.len() {
        return Err(Error::DimensionMismatch("map tuples of different lengths".into()));
    }
    outer.iter().zip(inner).map(|(s, p)| s.matmul(p)).collect()
}

impl<E: FieldElement> fmt::Display for Tensor<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor{:?} over {} {{", self.dims, self.field)?;
        for (i, (idx, e)) in self.support().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {idx:?}: {e}")?;
        }
        write!(f, " }}")
    }
}
