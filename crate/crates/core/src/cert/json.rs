//! The `maxpoly-cert/1` document: every bound appears as a shortest
//! round-trip decimal string and as a C99 hex-float string for bit-exact audit.

use serde::{Deserialize, Serialize};

use super::{Certificate, Interval};
use crate::error::{from_json_with_path, Error, Result};
use crate::formulation::Assignment;

pub const CERT_VERSION: &str = "maxpoly-cert/1";

/// C99 hex-float spelling, e.g. `0x1.8p-1` for `0.75`.
pub fn hex_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    let sign = if v.is_sign_negative() { "-" } else { "" };
    if v.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = v.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_bits == 0 {
        (0, -1022)
    } else {
        (1, exp_bits - 1023)
    };
    let mut frac = format!("{mant:013x}");
    while frac.ends_with('0') {
        frac.pop();
    }
    let dot = if frac.is_empty() { "" } else { "." };
    format!("{sign}0x{lead}{dot}{frac}p{exp:+}")
}

/// Parses the output of [`hex_f64`] (and other normalized hex floats).
pub fn parse_hex_f64(s: &str) -> Result<f64> {
    let bad = || Error::domain(format!("malformed hex float {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body {
        "inf" => f64::INFINITY,
        "nan" => f64::NAN,
        _ => {
            let body = body.strip_prefix("0x").ok_or_else(bad)?;
            let (mant, exp) = body.split_once('p').ok_or_else(bad)?;
            let exp: i32 = exp.parse().map_err(|_| bad())?;
            let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
            if frac.len() > 13 || int.len() != 1 {
                return Err(bad());
            }
            let lead = u64::from_str_radix(int, 16).map_err(|_| bad())?;
            let frac_bits = if frac.is_empty() {
                0
            } else {
                u64::from_str_radix(frac, 16).map_err(|_| bad())? << (4 * (13 - frac.len()))
            };
            let bits = match lead {
                1 => {
                    let biased = exp + 1023;
                    if !(1..=2046).contains(&biased) {
                        return Err(bad());
                    }
                    ((biased as u64) << 52) | frac_bits
                }
                0 if frac_bits == 0 => 0,
                0 if exp == -1022 => frac_bits,
                _ => return Err(bad()),
            };
            f64::from_bits(bits)
        }
    };
    Ok(if neg { -v } else { v })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bound {
    pub decimal: String,
    pub hex: String,
}

impl Bound {
    fn of(v: f64) -> Self {
        Self {
            decimal: v.to_string(),
            hex: hex_f64(v),
        }
    }

    fn value(&self, path: &str) -> Result<f64> {
        let v = parse_hex_f64(&self.hex).map_err(|e| Error::Schema {
            path: path.into(),
            message: e.to_string(),
        })?;
        let d: f64 = self.decimal.parse().map_err(|_| Error::Schema {
            path: path.into(),
            message: format!("malformed decimal {:?}", self.decimal),
        })?;
        if d.to_bits() != v.to_bits() {
            return Err(Error::Schema {
                path: path.into(),
                message: format!("decimal {} and hex {} disagree", self.decimal, self.hex),
            });
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub lo: Bound,
    pub hi: Bound,
}

impl IntervalDoc {
    fn of(i: Interval) -> Self {
        Self {
            lo: Bound::of(i.lo),
            hi: Bound::of(i.hi),
        }
    }

    fn interval(&self, path: &str) -> Result<Interval> {
        Interval::new(
            self.lo.value(&format!("{path}.lo"))?,
            self.hi.value(&format!("{path}.hi"))?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    version: String,
    n: usize,
    convex_verified: bool,
    certified_lower_bound: Option<Bound>,
    failure: Option<String>,
    area: IntervalDoc,
    diameter_sq: IntervalDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            version: CERT_VERSION.into(),
            n: self.n,
            convex_verified: self.convex_verified,
            certified_lower_bound: self.certified_lower_bound.map(Bound::of),
            failure: self.failure.clone(),
            area: IntervalDoc::of(self.area),
            diameter_sq: IntervalDoc::of(self.diameter_sq),
            x: self.assignment.as_ref().map(|a| a.x.clone()),
            vertices: self.vertices.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        let doc: CertificateDoc = from_json_with_path(text)?;
        if doc.version != CERT_VERSION {
            return Err(Error::Schema {
                path: "version".into(),
                message: format!("expected {CERT_VERSION:?}, got {:?}", doc.version),
            });
        }
        if doc.convex_verified != doc.certified_lower_bound.is_some() {
            return Err(Error::Schema {
                path: "certified_lower_bound".into(),
                message: "must be present exactly when convex_verified".into(),
            });
        }
        Ok(Certificate {
            n: doc.n,
            area: doc.area.interval("area")?,
            diameter_sq: doc.diameter_sq.interval("diameter_sq")?,
            convex_verified: doc.convex_verified,
            certified_lower_bound: doc
                .certified_lower_bound
                .map(|b| b.value("certified_lower_bound"))
                .transpose()?,
            failure: doc.failure,
            assignment: doc.x.map(Assignment::from_x),
            vertices: doc.vertices,
        })
    }
}
