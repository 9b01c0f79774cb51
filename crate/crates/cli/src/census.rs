//! Exhaustive classification of every tensor in `F_p^{2×2×2}`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use tensorgap::bruteforce::{subrank_exact, DEFAULT_CEILING};
use tensorgap::order3::{cayley_hyperdet, classify_222, factor_ranks};
use tensorgap::{AsymptoticClass, FieldSpec, Orbit222, Scalar, Tensor};

use crate::error::{CliError, Result};

pub const DEFAULT_MAX_PRIME: u64 = 3;
pub const CENSUS_DIMS: [usize; 3] = [2, 2, 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    /// `Σ t_o · p^o` over storage offsets `o`.
    pub id: u64,
    pub label: Orbit222,
    pub ranks: [usize; 3],
    pub cay: Scalar,
    pub subrank: usize,
    /// `None` only for the zero tensor.
    pub gap_class: Option<AsymptoticClass>,
}

/// Inverse of the row id encoding.
pub fn tensor_from_id(p: u64, dims: &[usize], id: u64) -> Tensor<Scalar> {
    let n: usize = dims.iter().product();
    let mut rest = id;
    let data = (0..n)
        .map(|_| {
            let v = rest % p;
            rest /= p;
            Scalar::residue(v, p)
        })
        .collect();
    Tensor::new(FieldSpec::Prime(p), dims.to_vec(), data).expect("valid dims")
}

pub fn tensor_id(t: &Tensor<Scalar>) -> Result<u64> {
    let FieldSpec::Prime(p) = t.field() else {
        return Err(CliError::Usage("tensor ids exist only over prime fields".into()));
    };
    let mut id = 0u64;
    for x in t.data().iter().rev() {
        let Scalar::Prime { residue, .. } = x else { unreachable!("residue over F_p") };
        id = id * p + residue;
    }
    Ok(id)
}

pub fn census_row(t: &Tensor<Scalar>, ceiling: u128) -> Result<CensusRow> {
    let label = classify_222(t)?;
    let subrank = if t.is_zero() { 0 } else { subrank_exact(t, ceiling)? };
    Ok(CensusRow {
        id: tensor_id(t)?,
        label,
        ranks: factor_ranks(t)?,
        cay: cayley_hyperdet(t)?,
        subrank,
        gap_class: label.asymptotic_class(),
    })
}

pub fn census_222(p: u64) -> Result<Vec<CensusRow>> {
    census_222_with(p, DEFAULT_MAX_PRIME, DEFAULT_CEILING)
}

/// Rows in id order, whatever the thread count.
pub fn census_222_with(p: u64, max_prime: u64, ceiling: u128) -> Result<Vec<CensusRow>> {
    FieldSpec::prime(p)?;
    if p > max_prime {
        return Err(CliError::Usage(format!("p = {p} exceeds the census limit {max_prime}")));
    }
    let total = p.pow(8);
    (0..total)
        .into_par_iter()
        .map(|id| census_row(&tensor_from_id(p, &CENSUS_DIMS, id), ceiling))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelCount {
    pub label: &'static str,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub format_version: u32,
    pub p: u64,
    pub rows: usize,
    pub counts: Vec<LabelCount>,
    /// Labels whose rows disagree with the subrank their class predicts.
    pub subrank_mismatches: Vec<LabelCount>,
}

/// Subrank over the algebraic closure implied by the label.
pub fn expected_subrank(label: Orbit222) -> usize {
    match label {
        Orbit222::Zero => 0,
        Orbit222::UnitClass => 2,
        _ => 1,
    }
}

pub fn summarize(p: u64, rows: &[CensusRow]) -> CensusSummary {
    let count = |f: &dyn Fn(&CensusRow) -> bool| {
        Orbit222::ALL
            .iter()
            .map(|&o| LabelCount { label: o.name(), count: rows.iter().filter(|r| r.label == o && f(r)).count() })
            .collect::<Vec<_>>()
    };
    let mut mismatches = count(&|r| r.subrank != expected_subrank(r.label));
    mismatches.retain(|c| c.count > 0);
    CensusSummary {
        format_version: crate::document::FORMAT_VERSION,
        p,
        rows: rows.len(),
        counts: count(&|_| true),
        subrank_mismatches: mismatches,
    }
}

pub const CSV_HEADER: &str = "id,label,ranks,cay,subrank,gap_class";

pub fn write_csv(rows: &[CensusRow], p: u64, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let [a, b, c] = r.ranks;
        let gap = r.gap_class.map_or("none", |g| g.name());
        writeln!(out, "{},{},{a};{b};{c},{},{},{gap}", r.id, r.label.name(), r.cay, r.subrank)?;
    }
    let summary = serde_json::to_string(&summarize(p, rows)).expect("serializable");
    writeln!(out, "# summary {summary}")
}
