use thiserror::Error;

use crate::algebra::FieldSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid factor subset: {0}")]
    InvalidSubset(String),

    #[error("modulus must be prime (got {0})")]
    NotPrime(u64),

    #[error("modulus {0} exceeds the supported word size")]
    ModulusTooLarge(u64),

    #[error("the zero tensor has no flattening class")]
    ZeroTensor,

    #[error("genericity search inconclusive after {attempts} attempts")]
    InconclusiveGenericity { attempts: usize },

    #[error("random compression budget exhausted after {attempts} attempts")]
    BudgetExhausted { attempts: usize },

    #[error("search space of {size} candidates exceeds the ceiling {ceiling}")]
    SearchSpaceTooLarge { size: u128, ceiling: u128 },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("curve for factor {factor} is singular")]
    SingularCurve { factor: usize },

    #[error("shear parameters must sum to zero")]
    ShearSumNonzero,

    #[error("degenerate span: {0}")]
    DegenerateSpan(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
