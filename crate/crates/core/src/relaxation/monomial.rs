use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::formulation::{QuadExpr, Var};

/// A monomial as a dense exponent vector over a fixed variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u8>,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Self {
            exponents: vec![0; num_vars],
        }
    }

    pub fn from_exponents(exponents: Vec<u8>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn bumped(&self, pos: usize, by: i8) -> Monomial {
        let mut e = self.exponents.clone();
        e[pos] = (e[pos] as i8 + by) as u8;
        Monomial { exponents: e }
    }

    /// Value at a point given in the same variable order.
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(values)
            .fold(1.0, |acc, (&e, &v)| acc * v.powi(e as i32))
    }

    pub fn display<'a>(&'a self, vars: &'a [Var]) -> impl fmt::Display + 'a {
        MonomialDisplay { m: self, vars }
    }
}

/// Graded order: lower total degree first, then the variable listed first
/// carries the most weight (`x1^2 < x1*x2 < x2^2`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a [Var],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (&e, v) in self.m.exponents.iter().zip(self.vars) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

pub type Poly = BTreeMap<Monomial, f64>;

/// Reduction modulo the circle equalities `y_i^2 = 1 - x_i^2`.
#[derive(Debug, Clone)]
pub(crate) struct Substitution {
    /// For each variable position holding a `y`, the position of its `x`.
    y_partner: Vec<Option<usize>>,
}

impl Substitution {
    pub fn new(vars: &[Var]) -> Self {
        let y_partner = vars
            .iter()
            .map(|v| match v {
                Var::Y(_) => vars.iter().position(|w| *w == v.partner()),
                Var::X(_) => None,
            })
            .collect();
        Self { y_partner }
    }

    /// Adds `coeff * nf(m)` to `out`.
    pub fn normalize_into(&self, m: Monomial, coeff: f64, out: &mut Poly) {
        let hit = m
            .exponents
            .iter()
            .zip(&self.y_partner)
            .position(|(&e, p)| p.is_some() && e >= 2);
        match hit {
            None => *out.entry(m).or_insert(0.0) += coeff,
            Some(j) => {
                let px = self.y_partner[j].expect("y position");
                let rest = m.bumped(j, -2);
                let with_x = rest.bumped(px, 2);
                self.normalize_into(rest, coeff, out);
                self.normalize_into(with_x, -coeff, out);
            }
        }
    }

    pub fn normalize_poly(&self, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, &c) in p {
            self.normalize_into(m.clone(), c, &mut out);
        }
        out.retain(|_, c| *c != 0.0);
        out
    }
}

pub(crate) fn quad_to_poly(e: &QuadExpr, vars: &[Var]) -> Poly {
    let pos = |v: &Var| {
        vars.iter()
            .position(|w| w == v)
            .expect("expression variable belongs to the program")
    };
    let nv = vars.len();
    let mut p = Poly::new();
    let mut add = |m: Monomial, c: f64| *p.entry(m).or_insert(0.0) += c;
    if e.constant != 0.0 {
        add(Monomial::one(nv), e.constant);
    }
    for (v, &c) in &e.lin {
        add(Monomial::one(nv).bumped(pos(v), 1), c);
    }
    for ((a, b), &c) in &e.quad {
        add(Monomial::one(nv).bumped(pos(a), 1).bumped(pos(b), 1), c);
    }
    p.retain(|_, c| *c != 0.0);
    p
}

/// Normal-form monomials of total degree `<= degree`, in graded order.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBasis {
    pub degree: usize,
    pub variables: Vec<Var>,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MomentBasis {
    pub(crate) fn generate(variables: &[Var], degree: usize) -> Self {
        let nv = variables.len();
        let caps: Vec<usize> = variables
            .iter()
            .map(|v| if v.is_x() { degree } else { 1 })
            .collect();
        let mut monomials = Vec::new();
        let mut e = vec![0u8; nv];
        fn rec(pos: usize, left: usize, caps: &[usize], e: &mut Vec<u8>, out: &mut Vec<Monomial>) {
            if pos == e.len() {
                out.push(Monomial::from_exponents(e.clone()));
                return;
            }
            for k in 0..=left.min(caps[pos]) {
                e[pos] = k as u8;
                rec(pos + 1, left - k, caps, e, out);
            }
            e[pos] = 0;
        }
        rec(0, degree, &caps, &mut e, &mut monomials);
        monomials.sort();
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            degree,
            variables: variables.to_vec(),
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Number of leading monomials of degree `<= d` (the basis is graded).
    pub fn prefix_len(&self, d: usize) -> usize {
        self.monomials.partition_point(|m| m.degree() <= d)
    }
}
