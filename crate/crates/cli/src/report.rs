//! JSON rendering of classification results.

use serde::Serialize;
use tensorgap::{ClassificationReport, Confidence, GapClass, MapTuple, RankSignature, Scalar};

use crate::document::FORMAT_VERSION;

#[derive(Debug, Clone, Serialize)]
pub struct ConstantDoc {
    pub class: &'static str,
    pub exact: String,
    pub value: f64,
    pub lower_bound: bool,
}

impl From<&GapClass> for ConstantDoc {
    fn from(g: &GapClass) -> Self {
        ConstantDoc { class: g.class.name(), exact: g.exact.to_string(), value: g.value, lower_bound: g.lower_bound }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatteningRankDoc {
    pub subset: Vec<usize>,
    pub rank: usize,
}

pub fn signature_doc(sig: &RankSignature) -> Vec<FlatteningRankDoc> {
    sig.entries().iter().map(|(s, r)| FlatteningRankDoc { subset: s.factors(), rank: *r }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleDoc {
    pub seed: u64,
    pub cay: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub trichotomy: &'static str,
    pub asymptotic_class: &'static str,
    pub constant: ConstantDoc,
    pub confidence: String,
    pub rank_signature: Vec<FlatteningRankDoc>,
    pub cayley_samples: Vec<SampleDoc>,
    pub flattening_witness: Option<Vec<usize>>,
    pub unit_witness: Option<Vec<Vec<Vec<String>>>>,
    pub ground_field_witness_missing: bool,
}

pub fn maps_doc(maps: &MapTuple<Scalar>) -> Vec<Vec<Vec<String>>> {
    maps.iter()
        .map(|m| (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect())
        .collect()
}

pub fn confidence_text(c: &Confidence) -> String {
    match c {
        Confidence::Deterministic => "deterministic".into(),
        Confidence::Randomized(n) => format!("randomized({n})"),
    }
}

impl ReportDocument {
    pub fn new(r: &ClassificationReport) -> Self {
        ReportDocument {
            format_version: FORMAT_VERSION,
            trichotomy: r.trichotomy.name(),
            asymptotic_class: r.asymptotic_class.name(),
            constant: ConstantDoc::from(&r.constant),
            confidence: confidence_text(&r.confidence),
            rank_signature: signature_doc(&r.rank_signature),
            cayley_samples: r.cayley_samples.iter().map(|(s, c)| SampleDoc { seed: *s, cay: c.to_string() }).collect(),
            flattening_witness: r.flattening_witness.map(|s| s.factors()),
            unit_witness: r.unit_witness.as_ref().map(maps_doc),
            ground_field_witness_missing: r.ground_field_witness_missing,
        }
    }
}

/// One line per fact, for people.
pub fn human_summary(r: &ClassificationReport) -> String {
    let mut out = format!("class: {}\n", r.trichotomy.name());
    out += &format!("flattening ranks: {}\n", r.rank_signature);
    out += &format!("asymptotic subrank: {}\n", r.constant);
    out += &format!("confidence: {}\n", confidence_text(&r.confidence));
    if r.ground_field_witness_missing {
        out += "note: no restriction to the 2x2x2 unit tensor exists over the ground field for the sampled compression\n";
    }
    out
}
