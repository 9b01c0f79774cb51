use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::field::{FieldElement, FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: FieldElement> Matrix<E> {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for e in &data {
            field.ensure_same(&e.field())?;
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| E::from_i64(v, field))).collect();
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::new(field, rows.len(), cols, data).expect("well-formed literal matrix")
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![E::zero(field); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, E::one(field));
        }
        m
    }

    pub fn diagonal(field: FieldSpec, diag: Vec<E>) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        let cols = self.cols;
        self.data[r * cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    pub fn map<F: FieldElement>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn matmul(&self, rhs: &Matrix<E>) -> Result<Matrix<E>> {
        self.field.ensure_same(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Matrix<E> = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[E]) -> Result<Vec<E>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(E::zero(self.field), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        E::matrix_rank(self)
    }

    /// Determinant by elimination; `None` for non-square input.
    pub fn determinant(&self) -> Option<E> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = E::one(self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Some(E::zero(self.field));
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pivot = a[c * n + c].clone();
            det = det.mul(&pivot);
            let pinv = pivot.inv().unwrap();
            for r in c + 1..n {
                if a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].mul(&pinv);
                for j in c..n {
                    let v = a[r * n + j].sub(&f.mul(&a[c * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        Some(det)
    }

    pub fn inverse(&self) -> Option<Matrix<E>> {
        if !self.is_square() || self.rank() != self.rows {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for c in 0..n {
            let mut e = vec![E::zero(self.field); n];
            e[c] = E::one(self.field);
            cols.push(mat_solve(self, &e).ok()??);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for (c, col) in cols.into_iter().enumerate() {
            for (r, v) in col.into_iter().enumerate() {
                inv.set(r, c, v);
            }
        }
        Some(inv)
    }
}

/// Exact rank by Gaussian elimination; used for `F_p` and `K(ε)`.
pub fn gaussian_rank<E: FieldElement>(m: &Matrix<E>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<E> = m.data().to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else { continue };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let pinv = a[rank * cols + c].inv().unwrap();
        for r in rank + 1..rows {
            if a[r * cols + c].is_zero() {
                continue;
            }
            let f = a[r * cols + c].mul(&pinv);
            for j in c..cols {
                let v = a[r * cols + j].sub(&f.mul(&a[rank * cols + j]));
                a[r * cols + j] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Fraction-free (Bareiss) rank over `Q`: each row is cleared of
/// denominators, then eliminated with exact integer division by the previous
/// pivot.
pub(crate) fn bareiss_rank(m: &Matrix<Scalar>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = m.row(r);
        let lcm = row.iter().fold(BigInt::one(), |acc, s| {
            let q = s.as_rational().expect("rational matrix");
            acc.lcm(q.denom())
        });
        for s in row {
            let q = s.as_rational().unwrap();
            a.push(q.numer() * (&lcm / q.denom()));
        }
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else { continue };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let pivot = a[rank * cols + c].clone();
        for r in rank + 1..rows {
            let lead = a[r * cols + c].clone();
            for j in c + 1..cols {
                let v = (&pivot * &a[r * cols + j] - &lead * &a[rank * cols + j]) / &prev;
                a[r * cols + j] = v;
            }
            a[r * cols + c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Exact rank of a matrix; Bareiss over `Q`, plain elimination otherwise.
pub fn mat_rank<E: FieldElement>(m: &Matrix<E>) -> usize {
    m.rank()
}

/// One solution of `A·x = b` (free variables set to zero), or `None` when the
/// system is inconsistent.
pub fn mat_solve<E: FieldElement>(a: &Matrix<E>, b: &[E]) -> Result<Option<Vec<E>>> {
    let (rows, cols) = a.shape();
    if b.len() != rows {
        return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {rows} rows", b.len())));
    }
    for e in b {
        a.field().ensure_same(&e.field())?;
    }
    let w = cols + 1;
    let mut m: Vec<E> = Vec::with_capacity(rows * w);
    for (r, rhs) in b.iter().enumerate() {
        m.extend(a.row(r).iter().cloned());
        m.push(rhs.clone());
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r * w + c].is_zero()) else { continue };
        if p != rank {
            for j in 0..w {
                m.swap(p * w + j, rank * w + j);
            }
        }
        let pinv = m[rank * w + c].inv().unwrap();
        for j in c..w {
            m[rank * w + j] = m[rank * w + j].mul(&pinv);
        }
        for r in 0..rows {
            if r == rank || m[r * w + c].is_zero() {
                continue;
            }
            let f = m[r * w + c].clone();
            for j in c..w {
                let v = m[r * w + j].sub(&f.mul(&m[rank * w + j]));
                m[r * w + j] = v;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if (rank..rows).any(|r| !m[r * w + cols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![E::zero(a.field()); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r * w + cols].clone();
    }
    Ok(Some(x))
}

impl<E: FieldElement> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
