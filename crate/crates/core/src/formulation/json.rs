//! `maxpoly-qp/1` documents.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use super::expr::{QuadExpr, Var};
use super::program::{ConstraintKind, ProgramOptions, QuadConstraint, QuadraticProgram};
use crate::error::{from_json_with_path, Error, Result};

pub const QP_VERSION: &str = "maxpoly-qp/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExprJson {
    quadratic: Vec<(Var, Var, f64)>,
    linear: Vec<(Var, f64)>,
    constant: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintJson {
    kind: ConstraintKind,
    tag: String,
    quadratic: Vec<(Var, Var, f64)>,
    linear: Vec<(Var, f64)>,
    constant: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramJson {
    version: String,
    n: usize,
    symmetric: bool,
    relax_closing_edge: bool,
    order_cut: bool,
    include_bound_implied: bool,
    variables: Vec<Var>,
    objective: ExprJson,
    constraints: Vec<ConstraintJson>,
}

fn expr_parts(e: &QuadExpr) -> (Vec<(Var, Var, f64)>, Vec<(Var, f64)>, f64) {
    (
        e.quad.iter().map(|(&(a, b), &c)| (a, b, c)).collect(),
        e.lin.iter().map(|(&v, &c)| (v, c)).collect(),
        e.constant,
    )
}

fn expr_from(quadratic: &[(Var, Var, f64)], linear: &[(Var, f64)], constant: f64) -> QuadExpr {
    let mut e = QuadExpr::constant(constant);
    for &(a, b, c) in quadratic {
        e.add_quad(a, b, c);
    }
    for &(v, c) in linear {
        e.add_lin(v, c);
    }
    e
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

impl QuadraticProgram {
    /// Pretty JSON with keys sorted.
    pub fn to_json(&self) -> String {
        let (q, l, c) = expr_parts(&self.objective);
        let doc = ProgramJson {
            version: QP_VERSION.into(),
            n: self.n,
            symmetric: self.options.symmetric,
            relax_closing_edge: self.options.relax_closing_edge,
            order_cut: self.options.order_cut,
            include_bound_implied: self.options.include_bound_implied,
            variables: self.variables.clone(),
            objective: ExprJson {
                quadratic: q,
                linear: l,
                constant: c,
            },
            constraints: self
                .constraints
                .iter()
                .map(|k| {
                    let (quadratic, linear, constant) = expr_parts(&k.expr);
                    ConstraintJson {
                        kind: k.kind,
                        tag: k.tag.clone(),
                        quadratic,
                        linear,
                        constant,
                    }
                })
                .collect(),
        };
        // Value maps are ordered, which gives canonical key order
        let value = serde_json::to_value(&doc).expect("program serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<QuadraticProgram> {
        let doc: ProgramJson = from_json_with_path(text)?;
        if doc.version != QP_VERSION {
            return Err(schema(
                "version",
                format!("expected `{QP_VERSION}`, got `{}`", doc.version),
            ));
        }
        let known: HashSet<Var> = doc.variables.iter().copied().collect();
        let check_vars = |path: &str, e: &QuadExpr| -> Result<()> {
            match e.variables().find(|v| !known.contains(v)) {
                Some(v) => Err(schema(path, format!("unknown variable `{v}`"))),
                None => Ok(()),
            }
        };
        let objective = expr_from(
            &doc.objective.quadratic,
            &doc.objective.linear,
            doc.objective.constant,
        );
        check_vars("objective", &objective)?;
        let mut tags = HashSet::new();
        let mut constraints = Vec::with_capacity(doc.constraints.len());
        for (i, c) in doc.constraints.into_iter().enumerate() {
            let path = format!("constraints[{i}]");
            if !tags.insert(c.tag.clone()) {
                return Err(schema(format!("{path}.tag"), format!("duplicate tag `{}`", c.tag)));
            }
            let expr = expr_from(&c.quadratic, &c.linear, c.constant);
            check_vars(&path, &expr)?;
            constraints.push(QuadConstraint {
                kind: c.kind,
                tag: c.tag,
                expr,
            });
        }
        Ok(QuadraticProgram {
            n: doc.n,
            options: ProgramOptions {
                symmetric: doc.symmetric,
                relax_closing_edge: doc.relax_closing_edge,
                order_cut: doc.order_cut,
                include_bound_implied: doc.include_bound_implied,
            },
            variables: doc.variables,
            objective,
            constraints,
        })
    }
}
