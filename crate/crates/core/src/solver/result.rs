//! The `maxpoly-result/1` document.

use serde::{Deserialize, Serialize};

use super::{SolveResult, SolverConfig};
use crate::error::{from_json_with_path, Error, Result};
use crate::formulation::Assignment;

pub const RESULT_VERSION: &str = "maxpoly-result/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveResultJson {
    pub version: String,
    pub n: usize,
    pub symmetric: bool,
    pub objective: f64,
    pub x: Vec<f64>,
    pub max_violation: f64,
    pub kkt_residual: f64,
    pub winning_start: usize,
    pub config: SolverConfig,
}

impl SolveResultJson {
    pub fn assignment(&self) -> Assignment {
        Assignment::from_x(self.x.clone())
    }
}

impl SolveResult {
    pub fn to_document(&self) -> SolveResultJson {
        SolveResultJson {
            version: RESULT_VERSION.to_owned(),
            n: self.n,
            symmetric: self.symmetric,
            objective: self.objective,
            x: self.best.x.clone(),
            max_violation: self.max_violation,
            kkt_residual: self.kkt_residual,
            winning_start: self.winning_start,
            config: self.config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("plain data serializes")
    }
}

impl SolveResultJson {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SolveResultJson = from_json_with_path(text)?;
        if doc.version != RESULT_VERSION {
            return Err(Error::Schema {
                path: "version".into(),
                message: format!("expected {RESULT_VERSION:?}, got {:?}", doc.version),
            });
        }
        Ok(doc)
    }
}
