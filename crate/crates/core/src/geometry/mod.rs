//! Planar primitives for small polygons.
//!
//! Polygons are stored counterclockwise. Constructors accept either orientation
//! and reverse clockwise input, remembering that they did so.

mod graph;
mod svg;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{from_json_with_path, Error, Result};

pub use graph::{check_graham_configuration, diameter_graph, DiameterGraph, DEFAULT_GRAPH_TOL};
pub use svg::render_svg;

/// Cross products with magnitude below this are treated as collinear.
pub const COLLINEAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
    reoriented: bool,
}

impl Polygon {
    /// Builds a polygon, reversing clockwise input to counterclockwise order.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidPolygon(format!("non-finite vertex {p:?}")));
        }
        let m = vertices.len();
        for i in 0..m {
            if vertices[i] == vertices[(i + 1) % m] {
                return Err(Error::InvalidPolygon(format!(
                    "consecutive vertices {} and {} coincide",
                    i,
                    (i + 1) % m
                )));
            }
        }
        let mut vertices = vertices;
        let reoriented = signed_area(&vertices) < 0.0;
        if reoriented {
            vertices.reverse();
        }
        Ok(Self {
            vertices,
            reoriented,
        })
    }

    /// Builds a polygon from a vertex list without reorienting it.
    ///
    /// Used by tests that need clockwise or self-intersecting input.
    pub fn raw(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        Ok(Self {
            vertices,
            reoriented: false,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when the constructor reversed clockwise input.
    pub fn reoriented(&self) -> bool {
        self.reoriented
    }

    pub fn scaled(&self, s: f64) -> Polygon {
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(p.x * s, p.y * s))
                .collect(),
            reoriented: self.reoriented,
        }
    }

    pub fn to_json(&self) -> String {
        let doc = PolygonJson {
            n: self.vertices.len(),
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("polygon serializes")
    }

    pub fn from_json(text: &str) -> Result<Polygon> {
        let doc: PolygonJson = from_json_with_path(text)?;
        if doc.n != doc.vertices.len() {
            return Err(Error::Schema {
                path: "n".into(),
                message: format!("n = {} but {} vertices given", doc.n, doc.vertices.len()),
            });
        }
        Polygon::new(doc.vertices.into_iter().map(|[x, y]| Point2::new(x, y)).collect())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonJson {
    n: usize,
    vertices: Vec<[f64; 2]>,
}

fn signed_area(v: &[Point2]) -> f64 {
    let m = v.len();
    let mut s = 0.0;
    for i in 0..m {
        let a = v[i];
        let b = v[(i + 1) % m];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

/// Signed shoelace area; positive for counterclockwise order.
pub fn area_shoelace(p: &Polygon) -> f64 {
    signed_area(&p.vertices)
}

pub fn diameter_sq(p: &Polygon) -> f64 {
    let v = &p.vertices;
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist_sq(v[j]));
        }
    }
    best
}

/// Convexity test on consecutive edge cross products.
///
/// `allow_collinear` admits flat vertices (`|cross| <= COLLINEAR_EPS`).
pub fn is_convex(p: &Polygon, allow_collinear: bool) -> bool {
    let v = &p.vertices;
    let m = v.len();
    let mut sign = 0.0f64;
    for i in 0..m {
        let a = v[i];
        let b = v[(i + 1) % m];
        let c = v[(i + 2) % m];
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if cross.abs() <= COLLINEAR_EPS {
            if allow_collinear {
                continue;
            }
            return false;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    // a simple closed convex polygon turns exactly once
    let mut turning = 0.0;
    for i in 0..m {
        let a = v[i];
        let b = v[(i + 1) % m];
        let c = v[(i + 2) % m];
        let e1 = (b.x - a.x, b.y - a.y);
        let e2 = (c.x - b.x, c.y - b.y);
        turning += (e1.0 * e2.1 - e1.1 * e2.0).atan2(e1.0 * e2.0 + e1.1 * e2.1);
    }
    sign != 0.0 && (turning.abs() - 2.0 * PI).abs() < 1e-6
}

/// Area of the regular `n`-gon scaled to unit diameter.
pub fn regular_small_area(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!("n must be at least 3, got {n}")));
    }
    let nf = n as f64;
    let even = nf / 8.0 * (2.0 * PI / nf).sin();
    if n % 2 == 0 {
        Ok(even)
    } else {
        Ok(even / (PI / (2.0 * nf)).cos().powi(2))
    }
}

/// Classical upper bound on the area of any small `n`-gon.
///
/// Equal to the regular small polygon's area for odd `n`.
pub fn upper_bound_area(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(format!("n must be at least 3, got {n}")));
    }
    let nf = n as f64;
    Ok(nf / 8.0 * (2.0 * PI / nf).sin() / (PI / (2.0 * nf)).cos().powi(2))
}

/// Regular `n`-gon of unit diameter, centred on the origin, counterclockwise.
///
/// For even `n` the circumradius is ½; for odd `n` it is chosen so the
/// longest diagonal is 1.
pub fn regular_small_polygon(n: usize) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::domain(format!("n must be at least 3, got {n}")));
    }
    let nf = n as f64;
    let r = if n % 2 == 0 {
        0.5
    } else {
        0.5 / (PI / (2.0 * nf)).cos()
    };
    let pts = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / nf;
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    Polygon::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kite() -> Polygon {
        let h = 3f64.sqrt() / 2.0;
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, h),
            Point2::new(0.0, 1.0),
            Point2::new(-0.5, h),
        ])
        .unwrap()
    }

    #[test]
    fn kite_area_is_half() {
        assert!((area_shoelace(&kite()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn too_few_vertices() {
        let r = Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidPolygon(_))));
    }

    #[test]
    fn repeated_vertex_rejected() {
        let r = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let mut v = kite().vertices().to_vec();
        v.reverse();
        let p = Polygon::new(v).unwrap();
        assert!(p.reoriented());
        assert!(area_shoelace(&p) > 0.0);
        assert!(!kite().reoriented());
    }

    #[test]
    fn regular_hexagon() {
        let hex = regular_small_polygon(6).unwrap();
        // closed form (n/8) sin(2 pi / n) at n = 6
        let closed = 6.0 / 8.0 * (PI / 3.0).sin();
        assert!((area_shoelace(&hex) - closed).abs() < 1e-12);
        assert!((area_shoelace(&hex) - 0.64951905).abs() < 1e-8);
        assert!((regular_small_area(6).unwrap() - area_shoelace(&hex)).abs() < 1e-12);
    }

    #[test]
    fn regular_areas() {
        assert!((regular_small_area(8).unwrap() - 0.70710678).abs() < 1e-8);
        assert!((regular_small_area(4).unwrap() - 0.5).abs() < 1e-15);
        assert!(regular_small_area(2).is_err());
        assert!(upper_bound_area(1).is_err());
    }

    #[test]
    fn odd_regular_polygon_has_unit_diameter() {
        for n in [3, 5, 7, 9] {
            let p = regular_small_polygon(n).unwrap();
            assert!((diameter_sq(&p) - 1.0).abs() < 1e-12);
            assert!((area_shoelace(&p) - regular_small_area(n).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_bound_values() {
        assert!((upper_bound_area(14).unwrap() - 0.76893595).abs() < 1e-8);
        assert!((upper_bound_area(16).unwrap() - 0.77279135).abs() < 1e-8);
        // evaluated directly from the closed form
        assert!((upper_bound_area(10).unwrap() - 0.753_162_770_252_055_7).abs() < 1e-15);
        assert!(upper_bound_area(10).unwrap() > 0.74913736);
    }

    #[test]
    fn bound_ordering() {
        for n in 3..40 {
            let reg = regular_small_area(n).unwrap();
            let ub = upper_bound_area(n).unwrap();
            if n % 2 == 1 {
                assert_eq!(reg, ub);
            } else {
                assert!(reg < ub);
            }
        }
    }

    #[test]
    fn diameter_examples() {
        let tri = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 1e-9),
        ])
        .unwrap();
        assert!((diameter_sq(&tri) - 1.0).abs() < 1e-12);
        let s = 0.3;
        let sq = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(s, 0.0),
            Point2::new(s, s),
            Point2::new(0.0, s),
        ])
        .unwrap();
        assert!((diameter_sq(&sq) - 2.0 * s * s).abs() < 1e-15);
    }

    #[test]
    fn convexity() {
        let sq = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(is_convex(&sq, false));
        let star = Polygon::raw(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(!is_convex(&star, false));
        let flat = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(!is_convex(&flat, false));
        assert!(is_convex(&flat, true));
    }

    #[test]
    fn polygon_json_round_trip() {
        let p = kite();
        let back = Polygon::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let err = Polygon::from_json(r#"{"n": 4}"#).unwrap_err();
        assert!(err.to_string().contains("vertices"), "{err}");
    }
}
