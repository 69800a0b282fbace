use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use super::assignment::{full_x_vars, identify_symmetric, reduced_x_vars, Assignment};
use super::expr::{LinExpr, QuadExpr, Var};
use super::vertices::{check_even_n, vertex_expressions};
use crate::error::{Error, Result};

/// What a constraint encodes. Inequalities read `expr >= 0`, equalities `expr = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    /// `1 - ||v_i - v_j||^2 >= 0`
    LessEqualOne,
    /// `||v_i - v_j||^2 - 1 = 0` (closing edge)
    EqualOne,
    /// `x_i^2 + y_i^2 - 1 = 0`
    CircleEquality,
    /// `x_i - lb >= 0` or `ub - x_i >= 0`
    Box,
    /// `x2 - x3 >= 0`
    OrderCut,
    /// `y_i >= 0`
    Nonneg,
}

impl ConstraintKind {
    pub fn is_equality(self) -> bool {
        matches!(self, ConstraintKind::EqualOne | ConstraintKind::CircleEquality)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadConstraint {
    pub kind: ConstraintKind,
    /// Stable identifier such as `pair:2:6`, `circle:3`, `box:x1:ub`.
    pub tag: String,
    pub expr: QuadExpr,
}

impl QuadConstraint {
    /// Violation at a point: `|g|` for equalities, `max(0, -g)` for inequalities.
    pub fn residual(&self, value: f64) -> f64 {
        if self.kind.is_equality() {
            value.abs()
        } else {
            (-value).max(0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProgramOptions {
    pub symmetric: bool,
    /// State the closing edge as `<= 1` instead of `= 1`.
    pub relax_closing_edge: bool,
    /// Add `x2 >= x3` (full programs only).
    pub order_cut: bool,
    /// Keep the three pairs around the pendant vertex that the bounds already imply.
    pub include_bound_implied: bool,
}

impl ProgramOptions {
    /// Defaults for a given `n`: the order cut is enabled only for the octagon.
    pub fn for_n(n: usize) -> Self {
        Self {
            order_cut: n == 8,
            ..Self::default()
        }
    }

    pub fn symmetric() -> Self {
        Self {
            symmetric: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProgram {
    pub n: usize,
    pub options: ProgramOptions,
    /// `x` variables first, then `y`, each in increasing index.
    pub variables: Vec<Var>,
    /// Area, to be maximized.
    pub objective: QuadExpr,
    pub constraints: Vec<QuadConstraint>,
}

impl QuadraticProgram {
    pub fn symmetric(&self) -> bool {
        self.options.symmetric
    }

    pub fn x_vars(&self) -> Vec<Var> {
        self.variables.iter().copied().filter(|v| v.is_x()).collect()
    }

    pub fn num_x(&self) -> usize {
        self.variables.iter().filter(|v| v.is_x()).count()
    }

    pub fn constraint(&self, tag: &str) -> Option<&QuadConstraint> {
        self.constraints.iter().find(|c| c.tag == tag)
    }

    pub fn count_kind(&self, kind: ConstraintKind) -> usize {
        self.constraints.iter().filter(|c| c.kind == kind).count()
    }

    /// Value lookup for this program's variables.
    pub(crate) fn values(&self, a: &Assignment) -> Result<impl Fn(Var) -> f64 + '_> {
        let nx = self.num_x();
        if a.x.len() != nx {
            return Err(Error::DimensionMismatch {
                expected: nx,
                got: a.x.len(),
            });
        }
        let y = a.y_values()?;
        let x = a.x.clone();
        let xs = self.x_vars();
        let pos = move |k: u16| {
            xs.iter()
                .position(|v| v.index() == k)
                .expect("variable belongs to program")
        };
        Ok(move |v: Var| match v {
            Var::X(k) => x[pos(k)],
            Var::Y(k) => y[pos(k)],
        })
    }
}

fn pair_tag(i: usize, j: usize) -> String {
    format!("pair:{i}:{j}")
}

/// Builds the quadratic program for even `n`.
///
/// Pairwise `<= 1` constraints cover every vertex pair except the diameter
/// graph's structural edges (unit length by construction), the closing edge
/// (stated separately), and, unless `include_bound_implied`, the three pairs
/// around the pendant vertex that `0 <= x1 <= 1/2` already keeps within reach.
pub fn build_program(n: usize, options: ProgramOptions) -> Result<QuadraticProgram> {
    check_even_n(n)?;
    let ve = vertex_expressions(n)?;
    let m = ve.num_pairs() as u16;
    let half = n / 2;

    let structural: HashSet<(usize, usize)> = ve.structural_edges().into_iter().collect();
    let closing = ve.closing_pair();
    let implied: HashSet<(usize, usize)> =
        [(half - 1, half + 1), (half - 1, half), (half, half + 1)]
            .into_iter()
            .collect();

    let mut constraints = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let d = ve.dist_sq(i, j);
            if (i, j) == closing {
                if options.relax_closing_edge {
                    let mut g = QuadExpr::constant(1.0);
                    g.add(&d, -1.0);
                    constraints.push(QuadConstraint {
                        kind: ConstraintKind::LessEqualOne,
                        tag: pair_tag(i, j),
                        expr: g,
                    });
                } else {
                    let mut g = d;
                    g.constant -= 1.0;
                    constraints.push(QuadConstraint {
                        kind: ConstraintKind::EqualOne,
                        tag: pair_tag(i, j),
                        expr: g,
                    });
                }
                continue;
            }
            if structural.contains(&(i, j)) {
                continue;
            }
            if implied.contains(&(i, j)) && !options.include_bound_implied {
                continue;
            }
            let mut g = QuadExpr::constant(1.0);
            g.add(&d, -1.0);
            constraints.push(QuadConstraint {
                kind: ConstraintKind::LessEqualOne,
                tag: pair_tag(i, j),
                expr: g,
            });
        }
    }
    for k in 1..=m {
        let mut g = QuadExpr::constant(-1.0);
        g.add_quad(Var::X(k), Var::X(k), 1.0);
        g.add_quad(Var::Y(k), Var::Y(k), 1.0);
        constraints.push(QuadConstraint {
            kind: ConstraintKind::CircleEquality,
            tag: format!("circle:{k}"),
            expr: g,
        });
    }
    for k in 1..=m {
        constraints.push(QuadConstraint {
            kind: ConstraintKind::Nonneg,
            tag: format!("nonneg:y{k}"),
            expr: QuadExpr::from_lin(&LinExpr::var(Var::Y(k))),
        });
    }
    for k in 1..=m {
        let ub = if k == 1 { 0.5 } else { 1.0 };
        constraints.push(QuadConstraint {
            kind: ConstraintKind::Box,
            tag: format!("box:x{k}:lb"),
            expr: QuadExpr::from_lin(&LinExpr::var(Var::X(k))),
        });
        let mut upper = LinExpr::constant(ub);
        upper.add_term(Var::X(k), -1.0);
        constraints.push(QuadConstraint {
            kind: ConstraintKind::Box,
            tag: format!("box:x{k}:ub"),
            expr: QuadExpr::from_lin(&upper),
        });
    }
    if options.order_cut && !options.symmetric && m >= 3 {
        let mut g = LinExpr::var(Var::X(2));
        g.add_term(Var::X(3), -1.0);
        constraints.push(QuadConstraint {
            kind: ConstraintKind::OrderCut,
            tag: "order:x2:x3".into(),
            expr: QuadExpr::from_lin(&g),
        });
    }

    let xs = full_x_vars(n);
    let variables = xs.iter().copied().chain(xs.iter().map(|v| v.partner())).collect();
    let full = QuadraticProgram {
        n,
        options: ProgramOptions {
            symmetric: false,
            ..options
        },
        variables,
        objective: ve.area_objective(),
        constraints,
    };
    if options.symmetric {
        Ok(reduce_symmetric(&full))
    } else {
        Ok(full)
    }
}

/// Identifies `x_{2i+1}` with `x_{2i}` (and `y` likewise), merging constraints
/// that coincide afterwards. Reduced input is returned unchanged.
pub fn reduce_symmetric(p: &QuadraticProgram) -> QuadraticProgram {
    if p.options.symmetric {
        return p.clone();
    }
    let n = p.n;
    let mut constraints: Vec<QuadConstraint> = Vec::new();
    for c in &p.constraints {
        let expr = c.expr.substitute(identify_symmetric);
        if expr.degree() == 0 {
            // e.g. the order cut collapses to 0 >= 0
            debug_assert!(c.residual(expr.constant) == 0.0, "{} became infeasible", c.tag);
            continue;
        }
        if constraints.iter().any(|d| d.kind == c.kind && d.expr == expr) {
            continue;
        }
        constraints.push(QuadConstraint {
            kind: c.kind,
            tag: c.tag.clone(),
            expr,
        });
    }
    let xs = reduced_x_vars(n);
    let variables = xs.iter().copied().chain(xs.iter().map(|v| v.partner())).collect();
    QuadraticProgram {
        n,
        options: ProgramOptions {
            symmetric: true,
            order_cut: false,
            ..p.options
        },
        variables,
        objective: p.objective.substitute(identify_symmetric),
        constraints,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub tag: String,
    pub kind: ConstraintKind,
    pub value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub objective: f64,
    pub max_violation: f64,
    pub residuals: Vec<Residual>,
}

impl EvalReport {
    pub fn max_violation_of(&self, kind: ConstraintKind) -> f64 {
        self.residuals
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

/// Objective and constraint residuals at an assignment in this program's variables.
pub fn evaluate(p: &QuadraticProgram, a: &Assignment) -> Result<EvalReport> {
    let val = p.values(a)?;
    let objective = p.objective.eval(&val);
    let residuals: Vec<Residual> = p
        .constraints
        .iter()
        .map(|c| {
            let value = c.expr.eval(&val);
            Residual {
                tag: c.tag.clone(),
                kind: c.kind,
                value,
                residual: c.residual(value),
            }
        })
        .collect();
    let max_violation = residuals.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(EvalReport {
        objective,
        max_violation,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrilateral_program() {
        let p = build_program(4, ProgramOptions::default()).unwrap();
        assert_eq!(p.count_kind(ConstraintKind::LessEqualOne), 0);
        assert_eq!(p.count_kind(ConstraintKind::EqualOne), 1);
        assert_eq!(p.objective.to_string(), "x1");
        let r = evaluate(&p, &Assignment::from_x(vec![0.5])).unwrap();
        assert_eq!(r.objective, 0.5);
        assert!(r.max_violation < 1e-15);
    }

    #[test]
    fn octagon_counts() {
        let p = build_program(
            8,
            ProgramOptions {
                relax_closing_edge: true,
                order_cut: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(p.count_kind(ConstraintKind::LessEqualOne), 18);
        assert_eq!(p.count_kind(ConstraintKind::CircleEquality), 5);
        assert_eq!(p.count_kind(ConstraintKind::OrderCut), 1);
        assert_eq!(p.count_kind(ConstraintKind::Nonneg), 5);
        assert_eq!(p.count_kind(ConstraintKind::Box), 10);
        assert_eq!(p.constraint("pair:2:6").unwrap().kind, ConstraintKind::LessEqualOne);

        let strict = build_program(8, ProgramOptions::default()).unwrap();
        assert_eq!(strict.count_kind(ConstraintKind::LessEqualOne), 17);
        assert_eq!(strict.constraint("pair:2:6").unwrap().kind, ConstraintKind::EqualOne);
        assert_eq!(strict.count_kind(ConstraintKind::OrderCut), 0);

        let audit = build_program(
            8,
            ProgramOptions {
                include_bound_implied: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(audit.count_kind(ConstraintKind::LessEqualOne), 20);
    }

    #[test]
    fn tags_are_unique_and_variables_used() {
        for n in (4..=16).step_by(2) {
            for sym in [false, true] {
                let p = build_program(
                    n,
                    ProgramOptions {
                        symmetric: sym,
                        ..ProgramOptions::for_n(n)
                    },
                )
                .unwrap();
                let tags: HashSet<_> = p.constraints.iter().map(|c| &c.tag).collect();
                assert_eq!(tags.len(), p.constraints.len());
                for v in &p.variables {
                    assert!(
                        p.constraints.iter().any(|c| c.expr.variables().any(|w| w == *v)),
                        "{v} unused for n={n}"
                    );
                }
                for c in &p.constraints {
                    assert!(c.expr.degree() <= 2);
                }
            }
        }
    }

    #[test]
    fn symmetric_variable_counts() {
        let p = build_program(10, ProgramOptions::symmetric()).unwrap();
        assert_eq!(p.x_vars(), vec![Var::X(1), Var::X(2), Var::X(4), Var::X(6)]);
        assert_eq!(p.variables.len(), 8);
        let p12 = build_program(12, ProgramOptions::symmetric()).unwrap();
        assert_eq!(p12.variables.len(), 10);
        for n in (4..=20).step_by(2) {
            let p = build_program(n, ProgramOptions::symmetric()).unwrap();
            assert_eq!(p.num_x(), (n - 2) / 2);
        }
    }

    #[test]
    fn reduction_is_idempotent() {
        let p = build_program(12, ProgramOptions::default()).unwrap();
        let r = reduce_symmetric(&p);
        assert_eq!(reduce_symmetric(&r), r);
        assert!(r.constraints.len() < p.constraints.len());
    }

    #[test]
    fn zero_point_is_pairwise_feasible() {
        let p = build_program(8, ProgramOptions::default()).unwrap();
        let r = evaluate(&p, &Assignment::from_x(vec![0.0; 5])).unwrap();
        assert_eq!(r.objective, 0.0);
        assert_eq!(r.max_violation_of(ConstraintKind::LessEqualOne), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let p = build_program(8, ProgramOptions::default()).unwrap();
        assert!(matches!(
            evaluate(&p, &Assignment::from_x(vec![0.1; 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
