use serde::{Deserialize, Serialize};

use super::expr::Var;
use super::vertices::{check_even_n, vertex_expressions};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon};

/// Values of the free variables. `y` absent means `y_i = +sqrt(1 - x_i^2)`.
///
/// `x` is either in full form (`n - 3` entries, `x1 .. x_{n-3}`) or in reduced
/// form (`(n - 2) / 2` entries, `x1, x2, x4, ..`). The two coincide for `n = 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Full,
    Reduced,
}

/// `x1 .. x_{n-3}`.
pub fn full_x_vars(n: usize) -> Vec<Var> {
    (1..=(n - 3) as u16).map(Var::X).collect()
}

/// `x1, x2, x4, .., x_{n-4}`.
pub fn reduced_x_vars(n: usize) -> Vec<Var> {
    std::iter::once(Var::X(1))
        .chain((2..=(n - 4) as u16).step_by(2).map(Var::X))
        .collect()
}

/// Maps odd-indexed pairs `(x_{2i+1}, y_{2i+1})` onto their even partners.
pub fn identify_symmetric(v: Var) -> Var {
    match v {
        Var::X(k) if k >= 3 && k % 2 == 1 => Var::X(k - 1),
        Var::Y(k) if k >= 3 && k % 2 == 1 => Var::Y(k - 1),
        other => other,
    }
}

/// The reflection `x_{2i} <-> x_{2i+1}` (and likewise for `y`).
pub fn sigma_var(v: Var) -> Var {
    let swap = |k: u16| {
        if k < 2 {
            k
        } else if k % 2 == 0 {
            k + 1
        } else {
            k - 1
        }
    };
    match v {
        Var::X(k) => Var::X(swap(k)),
        Var::Y(k) => Var::Y(swap(k)),
    }
}

pub(crate) fn derived_y(x: f64) -> Result<f64> {
    if !(x.is_finite()) || x > 1.0 || x < -1.0 {
        return Err(Error::domain(format!("cannot derive y from x = {x}")));
    }
    Ok((1.0 - x * x).max(0.0).sqrt())
}

impl Assignment {
    pub fn from_x(x: Vec<f64>) -> Self {
        Self { x, y: None }
    }

    pub fn with_y(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y: Some(y) }
    }

    pub fn form(&self, n: usize) -> Result<Form> {
        check_even_n(n)?;
        let len = self.x.len();
        if len == n - 3 {
            Ok(Form::Full)
        } else if len == (n - 2) / 2 {
            Ok(Form::Reduced)
        } else {
            Err(Error::DimensionMismatch {
                expected: n - 3,
                got: len,
            })
        }
    }

    /// `y` values, given or derived.
    pub fn y_values(&self) -> Result<Vec<f64>> {
        match &self.y {
            Some(y) => {
                if y.len() != self.x.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.x.len(),
                        got: y.len(),
                    });
                }
                Ok(y.clone())
            }
            None => self.x.iter().map(|&x| derived_y(x)).collect(),
        }
    }

    /// Expands a reduced assignment by duplicating paired variables.
    pub fn to_full(&self, n: usize) -> Result<Assignment> {
        match self.form(n)? {
            Form::Full => Ok(self.clone()),
            Form::Reduced => {
                let dup = |v: &[f64]| {
                    let mut out = vec![v[0]];
                    for &t in &v[1..] {
                        out.push(t);
                        out.push(t);
                    }
                    out
                };
                Ok(Assignment {
                    x: dup(&self.x),
                    y: self.y.as_deref().map(dup),
                })
            }
        }
    }

    /// Projects a full assignment onto the reduced variables `x1, x2, x4, ..`.
    pub fn to_reduced(&self, n: usize) -> Result<Assignment> {
        match self.form(n)? {
            Form::Reduced => Ok(self.clone()),
            Form::Full => {
                let pick = |v: &[f64]| {
                    std::iter::once(v[0])
                        .chain(v.iter().skip(1).step_by(2).copied())
                        .collect::<Vec<_>>()
                };
                Ok(Assignment {
                    x: pick(&self.x),
                    y: self.y.as_deref().map(pick),
                })
            }
        }
    }

    /// Value lookup over the full variable set.
    pub(crate) fn full_values(&self, n: usize) -> Result<impl Fn(Var) -> f64> {
        let full = self.to_full(n)?;
        let y = full.y_values()?;
        let x = full.x;
        Ok(move |v: Var| match v {
            Var::X(k) => x[k as usize - 1],
            Var::Y(k) => y[k as usize - 1],
        })
    }
}

/// Reflection through the pendant-edge axis on a full-form assignment.
pub fn apply_sigma(a: &Assignment, n: usize) -> Result<Assignment> {
    if n > 4 && a.form(n)? == Form::Reduced {
        return Err(Error::domain(
            "the reflection acts as the identity on reduced assignments",
        ));
    }
    a.form(n)?;
    let swap = |v: &[f64]| {
        let mut out = v.to_vec();
        let mut k = 1;
        while k + 1 < out.len() {
            out.swap(k, k + 1);
            k += 2;
        }
        out
    };
    Ok(Assignment {
        x: swap(&a.x),
        y: a.y.as_deref().map(swap),
    })
}

/// Numeric vertices `v_1 .. v_n` in label order (clockwise).
pub fn vertex_points(n: usize, a: &Assignment) -> Result<Vec<Point2>> {
    let ve = vertex_expressions(n)?;
    let val = a.full_values(n)?;
    Ok(ve
        .coords
        .iter()
        .map(|(x, y)| Point2::new(x.eval(&val), y.eval(&val)))
        .collect())
}

/// Concrete polygon for an assignment.
///
/// Labels run clockwise, so the returned polygon is the label order reversed
/// (`reoriented()` is true for any nondegenerate candidate).
pub fn assignment_to_polygon(n: usize, a: &Assignment) -> Result<Polygon> {
    Polygon::new(vertex_points(n, a)?)
}
