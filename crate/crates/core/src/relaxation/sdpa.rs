//! SDPA sparse (`.dat-s`) export and the JSON sidecar naming each variable.
//!
//! SDPA's primal is `min c'x  s.t.  sum_k F_k x_k - F_0 >= 0`. Decision
//! variable `k` is moment `k` (the constant moment is folded into `F_0`), and
//! `c` is the negated area form, so the SDPA optimum is minus the relaxation
//! bound (up to `objective_constant`, which is reported in the sidecar).

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{BlockKind, SdpInstance};
use crate::error::{from_json_with_path, Error, Result};

pub const MOMENTS_VERSION: &str = "maxpoly-moments/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidecarMonomial {
    /// SDPA variable index (1-based).
    pub index: usize,
    /// Variable name -> exponent; absent variables have exponent zero.
    pub exponents: BTreeMap<String, u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidecarBlock {
    /// SDPA block number (1-based).
    pub block: usize,
    pub kind: BlockKind,
    pub tag: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsSidecar {
    pub version: String,
    pub n: usize,
    pub symmetric: bool,
    pub order: usize,
    pub variables: Vec<String>,
    /// Constant term of the area form, not representable in SDPA's `c`.
    pub objective_constant: f64,
    /// SDPA minimizes the negated area.
    pub objective_sense: String,
    pub monomials: Vec<SidecarMonomial>,
    pub blocks: Vec<SidecarBlock>,
}

impl MomentsSidecar {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MomentsSidecar = from_json_with_path(text)?;
        if doc.version != MOMENTS_VERSION {
            return Err(Error::Schema {
                path: "version".into(),
                message: format!("expected {MOMENTS_VERSION:?}, got {:?}", doc.version),
            });
        }
        Ok(doc)
    }
}

/// The `.dat-s` text and its sidecar.
pub fn export_sdpa(s: &SdpInstance) -> (String, MomentsSidecar) {
    let m = s.num_moment_vars();
    let mut out = String::new();
    let kind = if s.symmetric { "symmetric" } else { "full" };
    let _ = writeln!(
        out,
        "\"largest small polygon moment relaxation: n={} {kind} order={} ({m} moments)",
        s.n, s.order
    );
    let _ = writeln!(out, "{m}");
    let _ = writeln!(out, "{}", s.blocks.len());
    let sizes: Vec<String> = s
        .blocks
        .iter()
        .map(|b| match b.kind {
            BlockKind::Equality => format!("-{}", b.size),
            _ => b.size.to_string(),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));

    let mut c = vec![0.0; m];
    for &(i, v) in &s.objective.terms {
        if i > 0 {
            c[i - 1] = -v;
        }
    }
    let c: Vec<String> = c.iter().map(|v| fmt_num(*v)).collect();
    let _ = writeln!(out, "{}", c.join(" "));

    // Triplets sorted by (matno, blkno, i, j) for a canonical file.
    let mut triplets: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    for (b, block) in s.blocks.iter().enumerate() {
        for (i, j, f) in &block.entries {
            for &(k, v) in &f.terms {
                // F_0 carries the negated constant part.
                let v = if k == 0 { -v } else { v };
                if v != 0.0 {
                    triplets.push((k, b + 1, i + 1, j + 1, v));
                }
            }
        }
    }
    triplets.sort_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)));
    for (k, b, i, j, v) in triplets {
        let _ = writeln!(out, "{k} {b} {i} {j} {}", fmt_num(v));
    }

    let names: Vec<String> = s.variables.iter().map(|v| v.to_string()).collect();
    let sidecar = MomentsSidecar {
        version: MOMENTS_VERSION.into(),
        n: s.n,
        symmetric: s.symmetric,
        order: s.order,
        variables: names.clone(),
        objective_constant: s.objective.constant(),
        objective_sense: "sdpa minimizes -area".into(),
        monomials: s.moments.monomials[1..]
            .iter()
            .enumerate()
            .map(|(k, mono)| SidecarMonomial {
                index: k + 1,
                exponents: mono
                    .exponents()
                    .iter()
                    .zip(&names)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, name)| (name.clone(), e))
                    .collect(),
            })
            .collect(),
        blocks: s
            .blocks
            .iter()
            .enumerate()
            .map(|(b, block)| SidecarBlock {
                block: b + 1,
                kind: block.kind,
                tag: block.tag.clone(),
                size: block.size,
            })
            .collect(),
    };
    (out, sidecar)
}

fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}
