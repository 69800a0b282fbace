//! The program restricted to the circle manifold: `y_i = +sqrt(1 - x_i^2)`.
//!
//! Circle equalities and `y >= 0` hold identically here and are dropped; box
//! constraints become simple bounds; everything else is a smooth function of `x`.

use nalgebra::DMatrix;

use crate::formulation::{ConstraintKind, QuadExpr, QuadraticProgram, Var};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    X(usize),
    Y(usize),
}

/// Per-point cache of `y`, `dy/dx`, `d2y/dx2` for every coordinate.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    dy: Vec<f64>,
    d2y: Vec<f64>,
}

impl Manifold {
    /// Derivatives are taken at `min(x, 1 - clamp)` so they stay finite at `x = 1`.
    pub fn at(x: &[f64], clamp: f64) -> Self {
        let mut y = Vec::with_capacity(x.len());
        let mut dy = Vec::with_capacity(x.len());
        let mut d2y = Vec::with_capacity(x.len());
        for &t in x {
            y.push((1.0 - t * t).max(0.0).sqrt());
            let tc = t.min(1.0 - clamp).max(-1.0 + clamp);
            let r = (1.0 - tc * tc).sqrt();
            dy.push(-tc / r);
            d2y.push(-1.0 / (r * r * r));
        }
        Self {
            x: x.to_vec(),
            y,
            dy,
            d2y,
        }
    }

    fn val(&self, s: Slot) -> f64 {
        match s {
            Slot::X(j) => self.x[j],
            Slot::Y(j) => self.y[j],
        }
    }

    fn d1(&self, s: Slot) -> (usize, f64) {
        match s {
            Slot::X(j) => (j, 1.0),
            Slot::Y(j) => (j, self.dy[j]),
        }
    }

    fn d2(&self, s: Slot) -> f64 {
        match s {
            Slot::X(_) => 0.0,
            Slot::Y(j) => self.d2y[j],
        }
    }
}

/// A quadratic in `(x, y)` viewed as a function of `x` alone.
#[derive(Debug, Clone)]
pub struct SmoothFn {
    quad: Vec<(Slot, Slot, f64)>,
    lin: Vec<(Slot, f64)>,
    constant: f64,
}

impl SmoothFn {
    fn compile(e: &QuadExpr, slot: &impl Fn(Var) -> Slot) -> Self {
        Self {
            quad: e.quad.iter().map(|(&(a, b), &c)| (slot(a), slot(b), c)).collect(),
            lin: e.lin.iter().map(|(&v, &c)| (slot(v), c)).collect(),
            constant: e.constant,
        }
    }

    pub fn value(&self, m: &Manifold) -> f64 {
        let mut s = self.constant;
        for &(a, c) in &self.lin {
            s += c * m.val(a);
        }
        for &(a, b, c) in &self.quad {
            s += c * m.val(a) * m.val(b);
        }
        s
    }

    /// Adds `scale * grad` into `g`.
    pub fn add_grad(&self, m: &Manifold, scale: f64, g: &mut [f64]) {
        for &(a, c) in &self.lin {
            let (j, d) = m.d1(a);
            g[j] += scale * c * d;
        }
        for &(a, b, c) in &self.quad {
            let (ja, da) = m.d1(a);
            let (jb, db) = m.d1(b);
            g[ja] += scale * c * da * m.val(b);
            g[jb] += scale * c * m.val(a) * db;
        }
    }

    pub fn grad(&self, m: &Manifold) -> Vec<f64> {
        let mut g = vec![0.0; m.x.len()];
        self.add_grad(m, 1.0, &mut g);
        g
    }

    /// Adds `scale * hessian` into `h`.
    pub fn add_hess(&self, m: &Manifold, scale: f64, h: &mut DMatrix<f64>) {
        for &(a, c) in &self.lin {
            let (j, _) = m.d1(a);
            h[(j, j)] += scale * c * m.d2(a);
        }
        for &(a, b, c) in &self.quad {
            let (ja, da) = m.d1(a);
            let (jb, db) = m.d1(b);
            let k = scale * c;
            h[(ja, ja)] += k * m.d2(a) * m.val(b);
            h[(jb, jb)] += k * m.val(a) * m.d2(b);
            h[(ja, jb)] += k * da * db;
            h[(jb, ja)] += k * da * db;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothConstraint {
    pub tag: String,
    pub kind: ConstraintKind,
    pub equality: bool,
    pub f: SmoothFn,
}

#[derive(Debug, Clone)]
pub struct SmoothProblem {
    pub x_vars: Vec<Var>,
    pub objective: SmoothFn,
    /// Pairwise, closing-edge and order-cut constraints (`>= 0` or `= 0`).
    pub constraints: Vec<SmoothConstraint>,
    /// Box constraints as linear `>= 0` functions, kept for KKT bookkeeping.
    pub bound_constraints: Vec<SmoothConstraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub clamp: f64,
}

impl SmoothProblem {
    pub fn new(p: &QuadraticProgram, clamp: f64) -> Self {
        let x_vars = p.x_vars();
        let pos = |k: u16| {
            x_vars
                .iter()
                .position(|v| v.index() == k)
                .expect("variable belongs to program")
        };
        let slot = |v: Var| match v {
            Var::X(k) => Slot::X(pos(k)),
            Var::Y(k) => Slot::Y(pos(k)),
        };
        let dim = x_vars.len();
        let mut lower = vec![f64::NEG_INFINITY; dim];
        let mut upper = vec![f64::INFINITY; dim];
        let mut constraints = Vec::new();
        let mut bound_constraints = Vec::new();
        for c in &p.constraints {
            match c.kind {
                ConstraintKind::CircleEquality | ConstraintKind::Nonneg => {}
                ConstraintKind::Box => {
                    let (&v, &a) = c.expr.lin.iter().next().expect("box constraint is linear");
                    let j = pos(v.index());
                    let bound = -c.expr.constant / a;
                    if a > 0.0 {
                        lower[j] = lower[j].max(bound);
                    } else {
                        upper[j] = upper[j].min(bound);
                    }
                    bound_constraints.push(SmoothConstraint {
                        tag: c.tag.clone(),
                        kind: c.kind,
                        equality: false,
                        f: SmoothFn::compile(&c.expr, &slot),
                    });
                }
                _ => constraints.push(SmoothConstraint {
                    tag: c.tag.clone(),
                    kind: c.kind,
                    equality: c.kind.is_equality(),
                    f: SmoothFn::compile(&c.expr, &slot),
                }),
            }
        }
        for j in 0..dim {
            lower[j] = lower[j].max(0.0);
            upper[j] = upper[j].min(1.0);
        }
        Self {
            objective: SmoothFn::compile(&p.objective, &slot),
            x_vars,
            constraints,
            bound_constraints,
            lower,
            upper,
            clamp,
        }
    }

    pub fn dim(&self) -> usize {
        self.x_vars.len()
    }

    pub fn manifold(&self, x: &[f64]) -> Manifold {
        Manifold::at(x, self.clamp)
    }

    /// Projects onto the box, keeping `x < 1` by the interior clamp.
    pub fn project(&self, x: &mut [f64]) {
        for (j, t) in x.iter_mut().enumerate() {
            *t = t.max(self.lower[j]).min(self.upper[j].min(1.0 - self.clamp));
        }
    }

    /// All constraints that matter for KKT analysis: regular first, then bounds.
    pub fn all_constraints(&self) -> impl Iterator<Item = &SmoothConstraint> {
        self.constraints.iter().chain(self.bound_constraints.iter())
    }

    /// Largest violation over regular constraints and bounds.
    pub fn violation(&self, m: &Manifold) -> f64 {
        self.all_constraints()
            .map(|c| {
                let v = c.f.value(m);
                if c.equality {
                    v.abs()
                } else {
                    (-v).max(0.0)
                }
            })
            .fold(0.0, f64::max)
    }
}
