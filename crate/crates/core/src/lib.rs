//! Exact tensor algorithms: ranks of flattenings, subrank and restriction
//! search, classification of small tensors, and degeneration certificates.
//!
//! ```
//! use tensorgap::degeneration::{construct_w_degeneration, verify_certificate};
//! use tensorgap::order3::{gap_class, trichotomy};
//! use tensorgap::{unit_tensor, FieldSpec, Scalar};
//!
//! let t = unit_tensor::<Scalar>(3, 2, FieldSpec::Rational)?.pad_to(&[4, 3, 3])?;
//! let report = trichotomy(&t, 0, 8)?;
//! assert_eq!(gap_class(&report).to_string(), "≥ 2");
//! let cert = construct_w_degeneration(&t, 0)?;
//! assert!(verify_certificate(&cert).is_accept());
//! # Ok::<(), tensorgap::Error>(())
//! ```

pub mod algebra;
pub mod error;
pub mod tensor;

pub use algebra::{FieldElement, FieldSpec, LaurentSeries, Matrix, Poly, RatFunc, Scalar, Valuation};
pub use error::{Error, Result};
pub use tensor::{unit_tensor, w_tensor, w_tensor_2, FactorSet, MapTuple, Tensor};

pub mod bruteforce;
pub mod degeneration;
pub mod gap;
pub mod invariants;
pub mod order3;
pub mod sampling;

pub use degeneration::{DegenerationCertificate, Rescaling, Verdict};
pub use gap::{AsymptoticClass, GapClass};
pub use invariants::{GenericityConfig, RankSignature};
pub use order3::{ClassificationReport, Confidence, Orbit222, Trichotomy};
