//! File formats, reports and the exhaustive `2×2×2` census behind the
//! `tensorgap` command.

pub mod census;
pub mod document;
pub mod error;
pub mod report;

pub use census::{census_222, census_222_with, CensusRow, CensusSummary};
pub use document::{load_certificate, load_tensor, save_certificate, save_tensor, CertificateDocument, TensorDocument};
pub use error::{CliError, Result};
