//! Rigorous lower bounds on the optimal area from candidate polygons.
//!
//! A candidate is certified by enclosing its vertices in intervals, proving
//! strict convexity, and enclosing its area and squared diameter. Scaling the
//! candidate by `1 / sqrt(max(1, diameter_sq.hi))` yields a genuine small
//! polygon, so `area.lo / max(1, diameter_sq.hi)` is a lower bound on the
//! optimum that holds regardless of floating-point error.

mod interval;
mod json;

pub use interval::Interval;
pub use json::{hex_f64, parse_hex_f64, CERT_VERSION};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{vertex_expressions, Assignment, LinExpr, Var};
use crate::geometry::{upper_bound_area, Polygon};

/// Interval enclosure of one vertex.
pub type IntervalPoint = (Interval, Interval);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub area: Interval,
    pub diameter_sq: Interval,
    pub convex_verified: bool,
    /// Present exactly when `convex_verified`.
    pub certified_lower_bound: Option<f64>,
    /// Why certification failed, when it did.
    pub failure: Option<String>,
    /// The certified candidate, in program variables or as raw vertices.
    pub assignment: Option<Assignment>,
    pub vertices: Option<Vec<[f64; 2]>>,
}

fn check_unit(x: &[f64]) -> Result<()> {
    for (k, &t) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!(
                "coordinate {k} = {t} is outside [0, 1]; cannot certify"
            )));
        }
    }
    Ok(())
}

fn eval_interval(e: &LinExpr, val: &impl Fn(Var) -> Interval) -> Interval {
    let mut terms = e.coeffs.iter().map(|(&v, &c)| match c {
        1.0 => val(v),
        -1.0 => -val(v),
        _ => val(v) * c,
    });
    // Sum without a leading `0 +`, which would widen exact single terms.
    let first = match terms.next() {
        Some(t) => t,
        None => return Interval::point(e.constant),
    };
    let sum = terms.fold(first, |acc, t| acc + t);
    if e.constant == 0.0 {
        sum
    } else {
        sum + Interval::point(e.constant)
    }
}

/// Interval enclosures of `v_1 .. v_n` (label order, clockwise).
///
/// `y` is always re-derived as `sqrt(1 - x^2)` in interval arithmetic; a `y`
/// carried by the assignment is ignored.
pub fn enclose_polygon(n: usize, a: &Assignment) -> Result<Vec<IntervalPoint>> {
    let full = a.to_full(n)?;
    check_unit(&full.x)?;
    let one = Interval::point(1.0);
    let xs: Vec<Interval> = full.x.iter().map(|&t| Interval::point(t)).collect();
    let ys = xs
        .iter()
        .map(|&x| (one - x.sqr()).sqrt())
        .collect::<Result<Vec<_>>>()?;
    let val = |v: Var| match v {
        Var::X(k) => xs[k as usize - 1],
        Var::Y(k) => ys[k as usize - 1],
    };
    let ve = vertex_expressions(n)?;
    Ok(ve
        .coords
        .iter()
        .map(|(ex, ey)| (eval_interval(ex, &val), eval_interval(ey, &val)))
        .collect())
}

fn cross(o: IntervalPoint, a: IntervalPoint, b: IntervalPoint) -> Interval {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Certifies vertex enclosures given in counterclockwise order.
fn certify_ccw(ccw: &[IntervalPoint]) -> (Interval, Interval, Option<String>) {
    let m = ccw.len();
    // Strictly convex and simple iff every vertex lies strictly left of every
    // edge it is not an endpoint of.
    let mut failure = None;
    'outer: for i in 0..m {
        let j = (i + 1) % m;
        for k in 0..m {
            if k == i || k == j {
                continue;
            }
            if !cross(ccw[i], ccw[j], ccw[k]).is_positive() {
                failure = Some(format!(
                    "convexity not verified: vertex {} is not strictly left of edge {}-{}",
                    k + 1,
                    i + 1,
                    j + 1
                ));
                break 'outer;
            }
        }
    }

    let mut twice = Interval::point(0.0);
    for i in 0..m {
        let (p, q) = (ccw[i], ccw[(i + 1) % m]);
        twice = twice + (p.0 * q.1 - q.0 * p.1);
    }
    let area = twice * 0.5;

    let mut diam = Interval::point(0.0);
    for i in 0..m {
        for j in i + 1..m {
            let d = (ccw[i].0 - ccw[j].0).sqr() + (ccw[i].1 - ccw[j].1).sqr();
            diam = diam.max(d);
        }
    }
    if failure.is_none() && !area.is_positive() {
        failure = Some("area enclosure is not positive".into());
    }
    (area, diam, failure)
}

fn lower_bound(area: Interval, diam: Interval) -> f64 {
    let scale = diam.hi.max(1.0);
    if scale == 1.0 {
        area.lo
    } else {
        (area.lo / scale).next_down()
    }
}

fn assemble(n: usize, (area, diameter_sq, failure): (Interval, Interval, Option<String>)) -> Certificate {
    let convex_verified = failure.is_none();
    Certificate {
        n,
        area,
        diameter_sq,
        convex_verified,
        certified_lower_bound: convex_verified.then(|| lower_bound(area, diameter_sq)),
        failure,
        assignment: None,
        vertices: None,
    }
}

/// Certifies the polygon of an assignment (full or reduced form).
pub fn certify(n: usize, a: &Assignment) -> Result<Certificate> {
    let mut ccw = enclose_polygon(n, a)?;
    ccw.reverse();
    let mut cert = assemble(n, certify_ccw(&ccw));
    cert.assignment = Some(Assignment::from_x(a.x.clone()));
    Ok(cert)
}

/// Certifies an arbitrary polygon, taking its coordinates as exact.
pub fn certify_polygon(p: &Polygon) -> Certificate {
    let ccw: Vec<IntervalPoint> = p
        .vertices()
        .iter()
        .map(|v| (Interval::point(v.x), Interval::point(v.y)))
        .collect();
    let mut cert = assemble(p.len(), certify_ccw(&ccw));
    cert.vertices = Some(p.vertices().iter().map(|v| [v.x, v.y]).collect());
    cert
}

/// `(certified lower bound, analytic upper bound)` on the optimal area.
pub fn bracket(n: usize, a: &Assignment) -> Result<(f64, f64)> {
    let cert = certify(n, a)?;
    let lower = cert.certified_lower_bound.ok_or_else(|| {
        Error::Uncertified(cert.failure.clone().unwrap_or_else(|| "unknown".into()))
    })?;
    Ok((lower, upper_bound_area(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kite() {
        let a = Assignment::from_x(vec![0.5]);
        let c = certify(4, &a).unwrap();
        assert!(c.convex_verified);
        let lb = c.certified_lower_bound.unwrap();
        assert!(lb >= 0.5 - 1e-12 && lb <= 0.5);
        let (lo, hi) = bracket(4, &a).unwrap();
        assert_eq!(lo, lb);
        assert_eq!(hi, upper_bound_area(4).unwrap());
    }

    #[test]
    fn enclosure_of_half_and_one() {
        let v = enclose_polygon(4, &Assignment::from_x(vec![0.5])).unwrap();
        let r = 3f64.sqrt() / 2.0;
        assert!(v[0].1.contains(r) && v[0].1.width() <= 4.0 * (r.next_up() - r));
        let v = enclose_polygon(4, &Assignment::from_x(vec![1.0])).unwrap();
        assert_eq!(v[0].1.lo, 0.0);
        assert!(enclose_polygon(4, &Assignment::from_x(vec![1.5])).is_err());
    }

    #[test]
    fn flat_candidate_fails() {
        // x1 = 0 puts v1, v3 on the y axis with the origin and the pendant vertex.
        let c = certify(4, &Assignment::from_x(vec![0.0])).unwrap();
        assert!(!c.convex_verified);
        assert!(c.certified_lower_bound.is_none());
        assert!(matches!(
            bracket(4, &Assignment::from_x(vec![0.0])),
            Err(Error::Uncertified(_))
        ));
    }
}
