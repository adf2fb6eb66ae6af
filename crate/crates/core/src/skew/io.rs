//! JSON form of a [`SkewSystem`]; numbers are decimal strings with 17 significant digits.

use super::SkewSystem;
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "sopkit-1";

#[derive(Serialize, Deserialize)]
pub(crate) struct SystemDoc {
    schema_version: String,
    ensemble: EnsembleSpec,
    n: usize,
    q: Vec<Vec<String>>,
    r: Vec<String>,
    odd_shift: Vec<String>,
    lambda: Option<Vec<String>>,
}

/// `"{:.16e}"`, which round-trips every finite `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

pub(crate) fn strings(v: &[f64]) -> Vec<String> {
    v.iter().map(|&x| fmt_f64(x)).collect()
}

pub(crate) fn numbers(v: &[String]) -> Result<Vec<f64>> {
    v.iter().map(|s| parse_f64(s)).collect()
}

pub(crate) fn to_doc(sys: &SkewSystem) -> SystemDoc {
    SystemDoc {
        schema_version: SCHEMA_VERSION.into(),
        ensemble: sys.ensemble.clone(),
        n: sys.size(),
        q: sys.q.iter().map(|p| strings(&p.coeffs)).collect(),
        r: strings(&sys.r),
        odd_shift: strings(&sys.odd_shift),
        lambda: sys.lambda.as_deref().map(strings),
    }
}

pub fn write_system(sys: &SkewSystem) -> Result<String> {
    serde_json::to_string_pretty(&to_doc(sys)).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_system(json: &str) -> Result<SkewSystem> {
    let doc: SystemDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    from_doc(doc)
}

pub(crate) fn from_doc(doc: SystemDoc) -> Result<SkewSystem> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unknown schema version {:?}", doc.schema_version)));
    }
    let q = doc.q.iter().map(|c| Ok(Poly { coeffs: numbers(c)? })).collect::<Result<Vec<_>>>()?;
    let sys = SkewSystem {
        q,
        r: numbers(&doc.r)?,
        ensemble: doc.ensemble,
        odd_shift: numbers(&doc.odd_shift)?,
        lambda: doc.lambda.as_deref().map(numbers).transpose()?,
    };
    if sys.size() != doc.n {
        return Err(Error::Parse(format!("declared N = {} but {} skew-norms", doc.n, sys.size())));
    }
    sys.validate()?;
    Ok(sys)
}
