//! Versioned JSON documents for tensors and degeneration certificates.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tensorgap::{DegenerationCertificate, FieldSpec, Matrix, Poly, RatFunc, Rescaling, Scalar, Tensor};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub index: Vec<usize>,
    pub value: String,
}

/// Sparse tensor body: omitted entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorBody {
    pub dims: Vec<usize>,
    pub entries: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDocument {
    pub format_version: u32,
    pub field: String,
    pub dims: Vec<usize>,
    pub entries: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFuncDoc {
    #[serde(rename = "num-coeffs")]
    pub num_coeffs: Vec<String>,
    #[serde(rename = "den-coeffs")]
    pub den_coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RescalingDoc {
    pub factor: usize,
    pub exponent: i64,
    pub scalar: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub format_version: u32,
    pub field: String,
    pub source: TensorBody,
    pub target: TensorBody,
    /// One row-major matrix per factor, or `null`.
    pub compression: Option<Vec<Vec<Vec<String>>>>,
    pub curves: Vec<Vec<Vec<RatFuncDoc>>>,
    #[serde(default)]
    pub rescalings: Vec<RescalingDoc>,
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    text.parse::<FieldSpec>().map_err(|e| CliError::field("field", e))
}

fn scalar(text: &str, field: FieldSpec, at: impl FnOnce() -> String) -> Result<Scalar> {
    Scalar::parse(text, field).map_err(|e| CliError::field(at(), e))
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(CliError::field("format_version", format!("unsupported version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

pub fn tensor_body(t: &Tensor<Scalar>) -> TensorBody {
    TensorBody {
        dims: t.dims().to_vec(),
        entries: t.support().into_iter().map(|(index, v)| EntryDoc { index, value: v.to_string() }).collect(),
    }
}

pub fn body_to_tensor(body: &TensorBody, field: FieldSpec, name: &str) -> Result<Tensor<Scalar>> {
    let mut entries = Vec::with_capacity(body.entries.len());
    for (n, e) in body.entries.iter().enumerate() {
        let at = || format!("{name}entries[{n}]");
        if e.index.len() != body.dims.len() {
            return Err(CliError::field(
                format!("{}.index", at()),
                format!("has {} coordinates for order {}", e.index.len(), body.dims.len()),
            ));
        }
        if let Some((j, (&i, &d))) = e.index.iter().zip(&body.dims).enumerate().find(|(_, (&i, &d))| i >= d) {
            return Err(CliError::field(format!("{}.index", at()), format!("coordinate {j} is {i}, outside 0..{d}")));
        }
        let v = scalar(&e.value, field, || format!("{}.value", at()))?;
        entries.push((e.index.clone(), v));
    }
    Tensor::from_entries(field, body.dims.clone(), entries).map_err(|e| CliError::field(format!("{name}entries"), e))
}

impl TensorDocument {
    pub fn from_tensor(t: &Tensor<Scalar>) -> Self {
        let body = tensor_body(t);
        TensorDocument { format_version: FORMAT_VERSION, field: t.field().to_string(), dims: body.dims, entries: body.entries }
    }

    pub fn to_tensor(&self) -> Result<Tensor<Scalar>> {
        check_version(self.format_version)?;
        let field = parse_field(&self.field)?;
        let body = TensorBody { dims: self.dims.clone(), entries: self.entries.clone() };
        body_to_tensor(&body, field, "")
    }
}

pub fn parse_tensor(text: &str) -> Result<Tensor<Scalar>> {
    let doc: TensorDocument = serde_json::from_str(text).map_err(CliError::syntax)?;
    doc.to_tensor()
}

pub fn print_tensor(t: &Tensor<Scalar>) -> String {
    serde_json::to_string_pretty(&TensorDocument::from_tensor(t)).expect("serializable") + "\n"
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn load_tensor(path: &Path) -> Result<Tensor<Scalar>> {
    parse_tensor(&read(path)?)
}

pub fn save_tensor(t: &Tensor<Scalar>, path: &Path) -> Result<()> {
    write(path, &print_tensor(t))
}

fn ratfunc_doc(f: &RatFunc) -> RatFuncDoc {
    let coeffs = |p: &Poly| p.coeffs().iter().map(|c| c.to_string()).collect();
    RatFuncDoc { num_coeffs: coeffs(f.num()), den_coeffs: coeffs(f.den()) }
}

fn doc_ratfunc(d: &RatFuncDoc, field: FieldSpec, at: &str) -> Result<RatFunc> {
    let poly = |cs: &[String], which: &str| -> Result<Poly> {
        let v = cs
            .iter()
            .enumerate()
            .map(|(i, c)| scalar(c, field, || format!("{at}.{which}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, v))
    };
    let num = poly(&d.num_coeffs, "num-coeffs")?;
    let den = poly(&d.den_coeffs, "den-coeffs")?;
    if den.is_zero() {
        return Err(CliError::field(format!("{at}.den-coeffs"), "denominator is zero"));
    }
    Ok(RatFunc::new(num, den))
}

fn rows_of<E: tensorgap::FieldElement>(m: &Matrix<E>) -> Vec<Vec<E>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

impl CertificateDocument {
    pub fn from_certificate(c: &DegenerationCertificate) -> Self {
        CertificateDocument {
            format_version: FORMAT_VERSION,
            field: c.field.to_string(),
            source: tensor_body(&c.source),
            target: tensor_body(&c.target),
            compression: c.compression.as_ref().map(|maps| {
                maps.iter()
                    .map(|m| rows_of(m).into_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
                    .collect()
            }),
            curves: c
                .curves
                .iter()
                .map(|m| rows_of(m).into_iter().map(|r| r.iter().map(ratfunc_doc).collect()).collect())
                .collect(),
            rescalings: c
                .rescalings
                .iter()
                .map(|r| RescalingDoc { factor: r.factor, exponent: r.exponent, scalar: r.scalar.to_string(), note: r.note.clone() })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<DegenerationCertificate> {
        check_version(self.format_version)?;
        let field = parse_field(&self.field)?;
        let source = body_to_tensor(&self.source, field, "source.")?;
        let target = body_to_tensor(&self.target, field, "target.")?;
        let compression = match &self.compression {
            None => None,
            Some(maps) => Some(
                maps.iter()
                    .enumerate()
                    .map(|(j, rows)| {
                        let rows = rows
                            .iter()
                            .enumerate()
                            .map(|(r, row)| {
                                row.iter()
                                    .enumerate()
                                    .map(|(c, x)| scalar(x, field, || format!("compression[{j}][{r}][{c}]")))
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Matrix::from_rows(field, rows).map_err(|e| CliError::field(format!("compression[{j}]"), e))
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let curves = self
            .curves
            .iter()
            .enumerate()
            .map(|(j, rows)| {
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, f)| doc_ratfunc(f, field, &format!("curves[{j}][{r}][{c}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_rows(field, rows).map_err(|e| CliError::field(format!("curves[{j}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        let rescalings = self
            .rescalings
            .iter()
            .enumerate()
            .map(|(n, r)| {
                Ok(Rescaling {
                    factor: r.factor,
                    exponent: r.exponent,
                    scalar: scalar(&r.scalar, field, || format!("rescalings[{n}].scalar"))?,
                    note: r.note.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DegenerationCertificate { field, source, compression, target, curves, rescalings })
    }
}

pub fn parse_certificate(text: &str) -> Result<DegenerationCertificate> {
    let doc: CertificateDocument = serde_json::from_str(text).map_err(CliError::syntax)?;
    doc.to_certificate()
}

pub fn print_certificate(c: &DegenerationCertificate) -> String {
    serde_json::to_string_pretty(&CertificateDocument::from_certificate(c)).expect("serializable") + "\n"
}

pub fn load_certificate(path: &Path) -> Result<DegenerationCertificate> {
    parse_certificate(&read(path)?)
}

pub fn save_certificate(c: &DegenerationCertificate, path: &Path) -> Result<()> {
    write(path, &print_certificate(c))
}
