//! Fixed inputs for the benchmarks.

use tensorgap::invariants::has_rank_one_flattening;
use tensorgap::sampling::{random_matrix, random_tensor, rng};
use tensorgap::{FieldSpec, Matrix, Scalar, Tensor};

pub fn rational_matrix(n: usize, seed: u64) -> Matrix<Scalar> {
    random_matrix(&mut rng(seed), FieldSpec::Rational, n, n, 50)
}

pub fn tensor(field: FieldSpec, dims: &[usize], seed: u64) -> Tensor<Scalar> {
    random_tensor(&mut rng(seed), field, dims, 5)
}

/// First seeded tensor without a rank-one flattening.
pub fn pr_two_tensor(dims: &[usize], seed: u64) -> Tensor<Scalar> {
    let mut g = rng(seed);
    loop {
        let t = random_tensor(&mut g, FieldSpec::Rational, dims, 3);
        if !t.is_zero() && has_rank_one_flattening(&t).unwrap().is_none() {
            return t;
        }
    }
}
