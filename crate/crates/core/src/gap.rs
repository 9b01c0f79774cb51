//! The gap constants `c_k = k / (k−1)^{(k−1)/k} = 2^{h(1/k)}` and the
//! asymptotic-subrank class of a classified order-3 tensor.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GapConstant {
    pub k: usize,
    /// Closed form, e.g. `3/2^(2/3)`.
    pub exact: String,
    pub value: f64,
}

impl fmt::Display for GapConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c_{} = {} ≈ {:.5}", self.k, self.exact, self.value)
    }
}

/// Binary entropy in bits; `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `k / (k−1)^{(k−1)/k}`.
pub fn gap_constant_ratio(k: usize) -> f64 {
    let k = k as f64;
    k / (k - 1.0).powf((k - 1.0) / k)
}

/// `2^{h(1/k)}`.
pub fn gap_constant_entropy(k: usize) -> f64 {
    2f64.powf(binary_entropy(1.0 / k as f64))
}

/// `c_k` computed both ways; disagreement beyond `1e-12` is an error.
pub fn gap_constant(k: usize) -> Result<GapConstant> {
    if k < 2 {
        return Err(Error::InvalidDims(format!("gap constant needs k ≥ 2 (got {k})")));
    }
    let a = gap_constant_ratio(k);
    let b = gap_constant_entropy(k);
    if (a - b).abs() > 1e-12 {
        return Err(Error::Inconsistency(format!("c_{k}: {a} vs {b}")));
    }
    let exact = if k == 2 { "2".to_string() } else { format!("{k}/{}^({}/{k})", k - 1, k - 1) };
    let value = if k == 2 { 2.0 } else { a };
    Ok(GapConstant { k, exact, value })
}

/// Asymptotic subrank class of an order-3 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsymptoticClass {
    One,
    C3,
    AtLeastTwo,
}

impl AsymptoticClass {
    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticClass::One => "One",
            AsymptoticClass::C3 => "C3",
            AsymptoticClass::AtLeastTwo => "AtLeastTwo",
        }
    }
}

/// The value (or lower bound) of the asymptotic subrank for a class.
#[derive(Debug, Clone, PartialEq)]
pub struct GapClass {
    pub class: AsymptoticClass,
    pub exact: String,
    pub value: f64,
    /// True when `value` is only a lower bound.
    pub lower_bound: bool,
}

impl fmt::Display for GapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            AsymptoticClass::One => write!(f, "1"),
            AsymptoticClass::C3 => write!(f, "{} ≈ {:.5}", self.exact, self.value),
            AsymptoticClass::AtLeastTwo => write!(f, "≥ 2"),
        }
    }
}

pub fn class_constant(class: AsymptoticClass) -> GapClass {
    match class {
        AsymptoticClass::One => GapClass { class, exact: "1".into(), value: 1.0, lower_bound: false },
        AsymptoticClass::C3 => {
            let c = gap_constant(3).expect("k = 3 is valid");
            GapClass { class, exact: c.exact, value: c.value, lower_bound: false }
        }
        AsymptoticClass::AtLeastTwo => GapClass { class, exact: "2".into(), value: 2.0, lower_bound: true },
    }
}
