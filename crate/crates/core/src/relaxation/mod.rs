//! Order-`d` moment relaxations of the area program.
//!
//! Moments are indexed by monomials in normal form, i.e. with every `y`
//! exponent at most one: the circle equalities are applied as substitutions
//! `y_i^2 -> 1 - x_i^2`, which removes both those equalities and the moments
//! they would tie together. The constant moment is pinned to one and is not a
//! decision variable.
//!
//! Nothing here solves the SDP; instances are exported in SDPA format and
//! moment vectors computed elsewhere can be read back through [`extract`].

mod monomial;
mod sdpa;

pub use monomial::{MomentBasis, Monomial, Poly};
pub use sdpa::{export_sdpa, MomentsSidecar, SidecarBlock, SidecarMonomial, MOMENTS_VERSION};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{Assignment, ConstraintKind, QuadraticProgram, Var};
use monomial::{quad_to_poly, Substitution};

/// Relative singular-value threshold used for numerical ranks.
pub const RANK_TOL: f64 = 1e-6;

/// Sparse linear form in the moments; index 0 is the pinned constant moment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LinearForm {
    pub terms: Vec<(usize, f64)>,
}

impl LinearForm {
    fn from_poly(p: &Poly, basis: &MomentBasis) -> Self {
        let mut terms: Vec<(usize, f64)> = p
            .iter()
            .map(|(m, &c)| {
                let i = basis
                    .position(m)
                    .expect("normal-form monomial within the moment degree");
                (i, c)
            })
            .collect();
        terms.sort_by_key(|t| t.0);
        Self { terms }
    }

    /// Value with the constant moment set to one. `moments[k]` is moment `k + 1`.
    pub fn eval(&self, moments: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(i, c)| c * if i == 0 { 1.0 } else { moments[i - 1] })
            .sum()
    }

    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.0 == 0)
            .map_or(0.0, |t| t.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    /// The moment matrix `M_d`.
    Moment,
    /// `M_{d-1}(g y)` for an inequality `g >= 0`.
    Localizing,
    /// `L(h m) = 0` for an equality `h = 0`, as pairs of opposite rows of a
    /// diagonal (LP) block.
    Equality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    /// Constraint tag, or `"moment"`.
    pub tag: String,
    pub size: usize,
    /// Upper-triangle entries `(i, j, form)` with `i <= j`, 0-based; diagonal
    /// only for equality blocks.
    pub entries: Vec<(usize, usize, LinearForm)>,
}

impl Block {
    /// Dense value of the block at a moment vector.
    pub fn matrix(&self, moments: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for (i, j, f) in &self.entries {
            let v = f.eval(moments);
            m[(*i, *j)] = v;
            m[(*j, *i)] = v;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpInstance {
    pub n: usize,
    pub symmetric: bool,
    pub order: usize,
    /// Program variables in moment-exponent order.
    pub variables: Vec<Var>,
    /// Normal-form monomials of degree `<= 2d`; position `k` is moment `k`,
    /// with moment 0 the pinned constant.
    pub moments: MomentBasis,
    /// Objective (area, to be maximized) as a form in the moments.
    pub objective: LinearForm,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxationStats {
    pub order: usize,
    /// Excludes the pinned constant moment.
    pub num_moment_vars: usize,
    pub moment_matrix_size: usize,
    pub localizing_blocks: usize,
    pub localizing_sizes: Vec<usize>,
    /// Rows of the equality block (two per scalar equality).
    pub equality_rows: usize,
}

/// Normal-form monomials of degree `<= degree` over the program's variables.
pub fn monomial_basis(p: &QuadraticProgram, degree: usize) -> Result<MomentBasis> {
    if degree == 0 {
        return Err(Error::domain("basis degree must be at least 1"));
    }
    Ok(MomentBasis::generate(&p.variables, degree))
}

fn product_form(
    sub: &Substitution,
    moments: &MomentBasis,
    g: &Poly,
    a: &Monomial,
    b: &Monomial,
) -> LinearForm {
    let ab = a.mul(b);
    let mut out = Poly::new();
    for (m, &c) in g {
        sub.normalize_into(m.mul(&ab), c, &mut out);
    }
    out.retain(|_, c| *c != 0.0);
    LinearForm::from_poly(&out, moments)
}

/// Builds the order-`d` relaxation.
///
/// Every inequality receives a localizing block indexed by the degree `d - 1`
/// basis (size 1 when `d = 1`). Circle equalities are consumed by the
/// substitution; any other equality (the closing edge) is imposed on all its
/// multiples by monomials of degree `<= 2d - 2` through an equality block.
pub fn build_relaxation(p: &QuadraticProgram, d: usize) -> Result<SdpInstance> {
    if d == 0 {
        return Err(Error::domain("relaxation order must be at least 1"));
    }
    if let Some(c) = p.constraints.iter().find(|c| c.expr.degree() > 2) {
        return Err(Error::domain(format!("constraint {} has degree above 2", c.tag)));
    }
    let vars = p.variables.clone();
    let sub = Substitution::new(&vars);
    let moments = MomentBasis::generate(&vars, 2 * d);
    let nv = vars.len();
    let one = Monomial::one(nv);
    let unit: Poly = [(one.clone(), 1.0)].into_iter().collect();

    let basis_d = &moments.monomials[..moments.prefix_len(d)];
    let basis_dm1 = &moments.monomials[..moments.prefix_len(d - 1)];

    let mut blocks = Vec::new();
    let mut moment = Vec::new();
    for i in 0..basis_d.len() {
        for j in i..basis_d.len() {
            moment.push((i, j, product_form(&sub, &moments, &unit, &basis_d[i], &basis_d[j])));
        }
    }
    blocks.push(Block {
        kind: BlockKind::Moment,
        tag: "moment".into(),
        size: basis_d.len(),
        entries: moment,
    });

    let mut eq_entries = Vec::new();
    let eq_mults = &moments.monomials[..moments.prefix_len(2 * d - 2)];
    for c in &p.constraints {
        if c.kind == ConstraintKind::CircleEquality {
            continue;
        }
        let g = sub.normalize_poly(&quad_to_poly(&c.expr, &vars));
        if c.kind.is_equality() {
            for m in eq_mults {
                let f = product_form(&sub, &moments, &g, m, &one);
                let neg = LinearForm {
                    terms: f.terms.iter().map(|&(i, v)| (i, -v)).collect(),
                };
                let r = eq_entries.len();
                eq_entries.push((r, r, f));
                eq_entries.push((r + 1, r + 1, neg));
            }
            continue;
        }
        let mut entries = Vec::new();
        for i in 0..basis_dm1.len() {
            for j in i..basis_dm1.len() {
                entries.push((i, j, product_form(&sub, &moments, &g, &basis_dm1[i], &basis_dm1[j])));
            }
        }
        blocks.push(Block {
            kind: BlockKind::Localizing,
            tag: c.tag.clone(),
            size: basis_dm1.len(),
            entries,
        });
    }
    if !eq_entries.is_empty() {
        blocks.push(Block {
            kind: BlockKind::Equality,
            tag: "equalities".into(),
            size: eq_entries.len(),
            entries: eq_entries,
        });
    }

    let objective = LinearForm::from_poly(
        &sub.normalize_poly(&quad_to_poly(&p.objective, &vars)),
        &moments,
    );
    Ok(SdpInstance {
        n: p.n,
        symmetric: p.symmetric(),
        order: d,
        variables: vars,
        moments,
        objective,
        blocks,
    })
}

impl SdpInstance {
    pub fn num_moment_vars(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moment_block(&self) -> &Block {
        &self.blocks[0]
    }
}

pub fn stats(s: &SdpInstance) -> RelaxationStats {
    let localizing: Vec<usize> = s
        .blocks
        .iter()
        .filter(|b| b.kind == BlockKind::Localizing)
        .map(|b| b.size)
        .collect();
    RelaxationStats {
        order: s.order,
        num_moment_vars: s.num_moment_vars(),
        moment_matrix_size: s.moment_block().size,
        localizing_blocks: localizing.len(),
        localizing_sizes: localizing,
        equality_rows: s
            .blocks
            .iter()
            .filter(|b| b.kind == BlockKind::Equality)
            .map(|b| b.size)
            .sum(),
    }
}

/// Moments of the Dirac measure at a point (constant moment omitted).
pub fn moments_from_point(s: &SdpInstance, a: &Assignment) -> Result<Vec<f64>> {
    if a.x.len() * 2 != s.variables.len() {
        return Err(Error::DimensionMismatch {
            expected: s.variables.len() / 2,
            got: a.x.len(),
        });
    }
    let y = a.y_values()?;
    let values: Vec<f64> = a.x.iter().chain(&y).copied().collect();
    Ok(s.moments.monomials[1..].iter().map(|m| m.eval(&values)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    /// Objective form at the moments; an upper bound when they solve the SDP.
    pub upper_bound: f64,
    pub moment_matrix_rank: usize,
    pub lower_rank: usize,
    /// `rank(M_d) == rank(M_{d-1})`.
    pub flat: bool,
    /// Degree-one `x` moments.
    pub candidate: Assignment,
    /// Flat with rank one: the candidate is the unique atom.
    pub certified: bool,
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    if top <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * top).count()
}

/// Reads a moment vector (constant omitted) back into bound, ranks and candidate.
pub fn extract(s: &SdpInstance, moments: &[f64]) -> Result<Extraction> {
    let nm = s.num_moment_vars();
    if moments.len() != nm {
        return Err(Error::DimensionMismatch {
            expected: nm,
            got: moments.len(),
        });
    }
    if let Some(k) = moments.iter().position(|v| !v.is_finite()) {
        return Err(Error::RejectedMoments(format!("moment {} is not finite", k + 1)));
    }
    // Blocks store one triangle, so the rebuilt matrix is symmetric by construction.
    let full = s.moment_block().matrix(moments);
    let lower_size = s.moments.prefix_len(s.order - 1);
    let rank = numerical_rank(&full);
    let lower_rank = numerical_rank(&full.view((0, 0), (lower_size, lower_size)).into_owned());
    let flat = rank == lower_rank;
    let nx = s.variables.iter().filter(|v| v.is_x()).count();
    let candidate = Assignment::from_x(moments[..nx].to_vec());
    Ok(Extraction {
        upper_bound: s.objective.eval(moments),
        moment_matrix_rank: rank,
        lower_rank,
        flat,
        certified: flat && rank == 1,
        candidate,
    })
}
