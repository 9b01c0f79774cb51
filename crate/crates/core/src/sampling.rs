//! Seeded random scalars, matrices and tensors.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::algebra::{FieldSpec, Matrix, Scalar};
use crate::tensor::Tensor;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[−bound, bound]` over `Q`; uniform residue over `F_p`.
pub fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Scalar {
    match field {
        FieldSpec::Rational => Scalar::from_i64(rng.random_range(-bound..=bound), field),
        FieldSpec::Prime(p) => Scalar::residue(rng.random_range(0..p), p),
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, field: FieldSpec, rows: usize, cols: usize, bound: i64) -> Matrix<Scalar> {
    let data = (0..rows * cols).map(|_| random_scalar(rng, field, bound)).collect();
    Matrix::new(field, rows, cols, data).expect("consistent shape")
}

/// Rejection-samples an invertible `n × n` matrix.
pub fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, bound: i64) -> Matrix<Scalar> {
    loop {
        let m = random_matrix(rng, field, n, n, bound);
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_tensor(rng: &mut ChaCha8Rng, field: FieldSpec, dims: &[usize], bound: i64) -> Tensor<Scalar> {
    let n: usize = dims.iter().product();
    let data = (0..n).map(|_| random_scalar(rng, field, bound)).collect();
    Tensor::new(field, dims.to_vec(), data).expect("consistent shape")
}

/// The tensor whose flat offsets are the binary digits of `code` (bit `i` is
/// the entry at offset `i`), over `F_2`.
pub fn f2_tensor_from_code(dims: &[usize], code: u64) -> Tensor<Scalar> {
    let field = FieldSpec::Prime(2);
    let n: usize = dims.iter().product();
    let data = (0..n).map(|i| Scalar::residue(code >> i & 1, 2)).collect();
    Tensor::new(field, dims.to_vec(), data).expect("consistent shape")
}
