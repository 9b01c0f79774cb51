//! Exact arithmetic over `Q`, `F_p` and the rational-function field K(ε),
//! plus the dense matrix algebra everything else is built on.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use field::{is_prime, FieldElement, FieldSpec, Scalar, MAX_MODULUS};
pub use matrix::{mat_rank, mat_solve, Matrix};
pub use poly::Poly;
pub use ratfunc::{LaurentSeries, RatFunc, Valuation};

/// Valuation of `f` at ε = 0.
pub fn rf_valuation(f: &RatFunc) -> Valuation {
    f.valuation()
}

/// Laurent coefficients of `f` from its valuation up to ε^upto.
pub fn rf_series(f: &RatFunc, upto: i64) -> LaurentSeries {
    f.series(upto)
}
