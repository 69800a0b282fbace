//! The quadratic program whose optimum is the largest small `n`-gon.

mod assignment;
mod expr;
mod json;
mod program;
mod vertices;

pub use assignment::{
    apply_sigma, assignment_to_polygon, full_x_vars, identify_symmetric, reduced_x_vars,
    sigma_var, vertex_points, Assignment, Form,
};
pub use expr::{LinExpr, QuadExpr, Var};
pub use json::QP_VERSION;
pub use program::{
    build_program, evaluate, reduce_symmetric, ConstraintKind, EvalReport, ProgramOptions,
    QuadConstraint, QuadraticProgram, Residual,
};
pub use vertices::{area_objective, vertex_expressions, VertexExprs};

pub(crate) use vertices::check_even_n;
