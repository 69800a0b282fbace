use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// A program variable, indexed as in the vertex construction (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(u16),
    Y(u16),
}

impl Var {
    pub fn index(self) -> u16 {
        match self {
            Var::X(i) | Var::Y(i) => i,
        }
    }

    pub fn is_x(self) -> bool {
        matches!(self, Var::X(_))
    }

    /// The other half of the `(x_i, y_i)` pair tied by `x_i^2 + y_i^2 = 1`.
    pub fn partner(self) -> Var {
        match self {
            Var::X(i) => Var::Y(i),
            Var::Y(i) => Var::X(i),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, tail) = s.split_at(s.len().min(1));
        let idx: u16 = tail
            .parse()
            .map_err(|_| format!("bad variable name `{s}`"))?;
        if idx == 0 {
            return Err(format!("bad variable name `{s}`"));
        }
        match head {
            "x" => Ok(Var::X(idx)),
            "y" => Ok(Var::Y(idx)),
            _ => Err(format!("bad variable name `{s}`")),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Affine expression `constant + sum coeff * var`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<Var, f64>,
    pub constant: f64,
}

impl LinExpr {
    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        let mut e = Self::default();
        e.add_term(v, 1.0);
        e
    }

    pub fn add_term(&mut self, v: Var, c: f64) {
        let slot = self.coeffs.entry(v).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coeffs.remove(&v);
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (&v, &c) in &other.coeffs {
            out.add_term(v, -c);
        }
        out.constant -= other.constant;
        out
    }

    pub fn scale(&self, s: f64) -> LinExpr {
        let mut out = LinExpr::constant(self.constant * s);
        for (&v, &c) in &self.coeffs {
            out.add_term(v, c * s);
        }
        out
    }

    pub fn mul(&self, other: &LinExpr) -> QuadExpr {
        let mut q = QuadExpr::constant(self.constant * other.constant);
        for (&a, &ca) in &self.coeffs {
            q.add_lin(a, ca * other.constant);
            for (&b, &cb) in &other.coeffs {
                q.add_quad(a, b, ca * cb);
            }
        }
        for (&b, &cb) in &other.coeffs {
            q.add_lin(b, cb * self.constant);
        }
        q
    }

    pub fn eval(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.constant + self.coeffs.iter().map(|(&v, &c)| c * value(v)).sum::<f64>()
    }

    pub fn substitute(&self, map: impl Fn(Var) -> Var) -> LinExpr {
        let mut out = LinExpr::constant(self.constant);
        for (&v, &c) in &self.coeffs {
            out.add_term(map(v), c);
        }
        out
    }
}

/// Polynomial of degree at most two.
///
/// Quadratic keys are ordered pairs `(a, b)` with `a <= b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuadExpr {
    pub quad: BTreeMap<(Var, Var), f64>,
    pub lin: BTreeMap<Var, f64>,
    pub constant: f64,
}

impl QuadExpr {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            ..Self::default()
        }
    }

    pub fn add_quad(&mut self, a: Var, b: Var, c: f64) {
        let key = if a <= b { (a, b) } else { (b, a) };
        let slot = self.quad.entry(key).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.quad.remove(&key);
        }
    }

    pub fn add_lin(&mut self, v: Var, c: f64) {
        let slot = self.lin.entry(v).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.lin.remove(&v);
        }
    }

    pub fn add(&mut self, other: &QuadExpr, s: f64) {
        for (&(a, b), &c) in &other.quad {
            self.add_quad(a, b, s * c);
        }
        for (&v, &c) in &other.lin {
            self.add_lin(v, s * c);
        }
        self.constant += s * other.constant;
    }

    pub fn scaled(&self, s: f64) -> QuadExpr {
        let mut out = QuadExpr::default();
        out.add(self, s);
        out
    }

    pub fn from_lin(e: &LinExpr) -> QuadExpr {
        let mut q = QuadExpr::constant(e.constant);
        for (&v, &c) in &e.coeffs {
            q.add_lin(v, c);
        }
        q
    }

    /// Squared Euclidean norm of a pair of affine coordinates.
    pub fn norm_sq(dx: &LinExpr, dy: &LinExpr) -> QuadExpr {
        let mut q = dx.mul(dx);
        q.add(&dy.mul(dy), 1.0);
        q
    }

    pub fn degree(&self) -> usize {
        if !self.quad.is_empty() {
            2
        } else if !self.lin.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.lin.is_empty() && self.constant == 0.0
    }

    pub fn eval(&self, value: impl Fn(Var) -> f64) -> f64 {
        let mut s = self.constant;
        for (&v, &c) in &self.lin {
            s += c * value(v);
        }
        for (&(a, b), &c) in &self.quad {
            s += c * value(a) * value(b);
        }
        s
    }

    pub fn substitute(&self, map: impl Fn(Var) -> Var) -> QuadExpr {
        let mut out = QuadExpr::constant(self.constant);
        for (&v, &c) in &self.lin {
            out.add_lin(map(v), c);
        }
        for (&(a, b), &c) in &self.quad {
            out.add_quad(map(a), map(b), c);
        }
        out
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        self.lin
            .keys()
            .copied()
            .chain(self.quad.keys().flat_map(|&(a, b)| [a, b]))
    }

    /// Largest absolute coefficient difference, for comparing expansions.
    pub fn max_abs_diff(&self, other: &QuadExpr) -> f64 {
        let mut d = self.clone();
        d.add(other, -1.0);
        d.quad
            .values()
            .chain(d.lin.values())
            .map(|c| c.abs())
            .fold(d.constant.abs(), f64::max)
    }
}

impl fmt::Display for QuadExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let only_constant = self.quad.is_empty() && self.lin.is_empty();
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: f64, body: String| -> fmt::Result {
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            if body.is_empty() {
                write!(f, "{a}")
            } else if a == 1.0 {
                write!(f, "{body}")
            } else {
                write!(f, "{a}*{body}")
            }
        };
        for (&(a, b), &c) in &self.quad {
            let body = if a == b {
                format!("{a}^2")
            } else {
                format!("{a}*{b}")
            };
            term(f, c, body)?;
        }
        for (&v, &c) in &self.lin {
            term(f, c, v.to_string())?;
        }
        if self.constant != 0.0 || only_constant {
            term(f, self.constant, String::new())?;
        }
        Ok(())
    }
}
