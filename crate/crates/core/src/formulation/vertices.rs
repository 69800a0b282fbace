use super::expr::{LinExpr, QuadExpr, Var};
use crate::error::{Error, Result};

/// Symbolic vertex coordinates `v_1 .. v_n` of the Graham configuration.
///
/// Two walks leave the origin along unit edges: `u_k` starts at `(x1, y1)` and
/// alternately subtracts/adds `(x_{2i}, y_{2i})`; `w_k` starts at `(-x1, y1)`
/// and alternates over the odd-indexed pairs. The walks meet at the closing
/// edge `u_last -- w_last`. The origin `v_n` and the pendant vertex
/// `v_{n/2} = (0, 1)` complete the polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexExprs {
    pub n: usize,
    /// `coords[i]` holds `(xbar, ybar)` of vertex `v_{i+1}`.
    pub coords: Vec<(LinExpr, LinExpr)>,
    /// 1-based vertex label of `u_k`.
    pub u_labels: Vec<usize>,
    /// 1-based vertex label of `w_k`.
    pub w_labels: Vec<usize>,
}

pub(crate) fn check_even_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::domain(format!("n must be even and at least 4, got {n}")));
    }
    if n > u16::MAX as usize {
        return Err(Error::domain(format!("n = {n} is too large")));
    }
    Ok(())
}

fn u_walk(k: usize) -> (LinExpr, LinExpr) {
    let mut x = LinExpr::var(Var::X(1));
    let mut y = LinExpr::var(Var::Y(1));
    for i in 1..=k {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        x.add_term(Var::X(2 * i as u16), s);
        y.add_term(Var::Y(2 * i as u16), s);
    }
    (x, y)
}

fn w_walk(k: usize) -> (LinExpr, LinExpr) {
    let mut x = LinExpr::default();
    let mut y = LinExpr::default();
    for i in 0..=k {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        x.add_term(Var::X(2 * i as u16 + 1), -s);
        y.add_term(Var::Y(2 * i as u16 + 1), s);
    }
    (x, y)
}

/// Builds the vertex expressions for even `n >= 4`.
pub fn vertex_expressions(n: usize) -> Result<VertexExprs> {
    check_even_n(n)?;
    let half = n / 2;
    let walk_len = half - 1; // k = 0 ..= n/2 - 2
    let mut slots: Vec<Option<(LinExpr, LinExpr)>> = vec![None; n];
    let mut u_labels = vec![0; walk_len];
    let mut w_labels = vec![0; walk_len];

    slots[n - 1] = Some((LinExpr::constant(0.0), LinExpr::constant(0.0)));
    slots[half - 1] = Some((LinExpr::constant(0.0), LinExpr::constant(1.0)));

    let floor_q = (n - 2) / 4;
    let ceil_q = (n - 2).div_ceil(4);
    let mut place = |label: usize, expr: (LinExpr, LinExpr)| {
        debug_assert!(slots[label - 1].is_none(), "vertex {label} assigned twice");
        slots[label - 1] = Some(expr);
    };
    for i in 1..=floor_q {
        place(i, u_walk(2 * i - 1));
        u_labels[2 * i - 1] = i;
        place(n - i, w_walk(2 * i - 1));
        w_labels[2 * i - 1] = n - i;
    }
    for i in 1..=ceil_q {
        place(half - i, w_walk(2 * (i - 1)));
        w_labels[2 * (i - 1)] = half - i;
        place(half + i, u_walk(2 * (i - 1)));
        u_labels[2 * (i - 1)] = half + i;
    }
    let coords = slots
        .into_iter()
        .map(|s| s.expect("every vertex is assigned"))
        .collect();
    Ok(VertexExprs {
        n,
        coords,
        u_labels,
        w_labels,
    })
}

impl VertexExprs {
    /// Number of `x` (equivalently `y`) variables in the full program.
    pub fn num_pairs(&self) -> usize {
        self.n - 3
    }

    pub fn vertex(&self, label: usize) -> &(LinExpr, LinExpr) {
        &self.coords[label - 1]
    }

    /// `||v_i - v_j||^2` expanded.
    pub fn dist_sq(&self, i: usize, j: usize) -> QuadExpr {
        let (xi, yi) = self.vertex(i);
        let (xj, yj) = self.vertex(j);
        QuadExpr::norm_sq(&xi.sub(xj), &yi.sub(yj))
    }

    /// The pair joined by the edge that closes the `(n-1)`-cycle.
    pub fn closing_pair(&self) -> (usize, usize) {
        let a = *self.u_labels.last().expect("walks are non-empty");
        let b = *self.w_labels.last().expect("walks are non-empty");
        (a.min(b), a.max(b))
    }

    /// Unit edges whose length is built into the construction
    /// (cycle edges along the walks, the two edges at the origin, the pendant edge).
    pub fn structural_edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut e = vec![
            (self.u_labels[0], n),
            (self.w_labels[0], n),
            (n / 2, n),
        ];
        for w in self.u_labels.windows(2) {
            e.push((w[0], w[1]));
        }
        for w in self.w_labels.windows(2) {
            e.push((w[0], w[1]));
        }
        e.into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect()
    }

    /// All `n` diameter-graph edges: structural edges plus the closing edge.
    pub fn graph_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.structural_edges();
        e.push(self.closing_pair());
        e.sort_unstable();
        e
    }

    /// The variable pair whose circle identity makes a structural edge unit length.
    pub fn edge_variable(&self, i: usize, j: usize) -> Option<u16> {
        let q = self.dist_sq(i, j);
        if q.lin.is_empty() && q.constant == 0.0 && q.quad.len() == 2 {
            let keys: Vec<_> = q.quad.iter().collect();
            match (keys[0], keys[1]) {
                (((Var::X(a), Var::X(a2)), &1.0), ((Var::Y(b), Var::Y(b2)), &1.0))
                    if a == a2 && b == b2 && a == b =>
                {
                    Some(*a)
                }
                _ => None,
            }
        } else {
            None
        }
    }

    /// Area objective: `x1 + 1/2 sum (ybar_i xbar_{i+1} - xbar_i ybar_{i+1})`
    /// over `i = 1..n-2`, skipping the two terms around the pendant vertex.
    pub fn area_objective(&self) -> QuadExpr {
        let n = self.n;
        let half = n / 2;
        let mut obj = QuadExpr::default();
        obj.add_lin(Var::X(1), 1.0);
        for i in 1..=n - 2 {
            if i == half - 1 || i == half {
                continue;
            }
            obj.add(&self.cross_term(i, i + 1), 0.5);
        }
        obj
    }

    /// Full clockwise shoelace over `i = 1..n-2` (the origin terms vanish).
    pub fn area_full_shoelace(&self) -> QuadExpr {
        let mut obj = QuadExpr::default();
        for i in 1..=self.n - 2 {
            obj.add(&self.cross_term(i, i + 1), 0.5);
        }
        obj
    }

    /// Trapezoid form `1/2 sum_{i=1}^{n} (xbar_i + xbar_{i+1})(ybar_i - ybar_{i+1})`, cyclic.
    pub fn area_trapezoid(&self) -> QuadExpr {
        let n = self.n;
        let mut obj = QuadExpr::default();
        for i in 1..=n {
            let j = i % n + 1;
            let (xi, yi) = self.vertex(i);
            let (xj, yj) = self.vertex(j);
            let sx = xi.sub(&xj.scale(-1.0));
            let dy = yi.sub(yj);
            obj.add(&sx.mul(&dy), 0.5);
        }
        obj
    }

    fn cross_term(&self, i: usize, j: usize) -> QuadExpr {
        let (xi, yi) = self.vertex(i);
        let (xj, yj) = self.vertex(j);
        let mut t = yi.mul(xj);
        t.add(&xi.mul(yj), -1.0);
        t
    }
}

/// Shorthand for [`VertexExprs::area_objective`].
pub fn area_objective(n: usize) -> Result<QuadExpr> {
    Ok(vertex_expressions(n)?.area_objective())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(terms: &[(Var, f64)]) -> LinExpr {
        let mut e = LinExpr::default();
        for &(v, c) in terms {
            e.add_term(v, c);
        }
        e
    }

    use Var::{X, Y};

    #[test]
    fn octagon_vertices_match_figure() {
        let ve = vertex_expressions(8).unwrap();
        assert_eq!(
            ve.vertex(6),
            &(
                lin(&[(X(1), 1.0), (X(2), -1.0), (X(4), 1.0)]),
                lin(&[(Y(1), 1.0), (Y(2), -1.0), (Y(4), 1.0)])
            )
        );
        assert_eq!(
            ve.vertex(2),
            &(
                lin(&[(X(1), -1.0), (X(3), 1.0), (X(5), -1.0)]),
                lin(&[(Y(1), 1.0), (Y(3), -1.0), (Y(5), 1.0)])
            )
        );
        assert_eq!(
            ve.vertex(7),
            &(lin(&[(X(3), 1.0), (X(1), -1.0)]), lin(&[(Y(1), 1.0), (Y(3), -1.0)]))
        );
        assert_eq!(
            ve.vertex(1),
            &(lin(&[(X(1), 1.0), (X(2), -1.0)]), lin(&[(Y(1), 1.0), (Y(2), -1.0)]))
        );
        assert_eq!(ve.vertex(3), &(lin(&[(X(1), -1.0)]), lin(&[(Y(1), 1.0)])));
        assert_eq!(ve.vertex(5), &(lin(&[(X(1), 1.0)]), lin(&[(Y(1), 1.0)])));
        assert_eq!(ve.vertex(4), &(LinExpr::constant(0.0), LinExpr::constant(1.0)));
        assert_eq!(ve.vertex(8), &(LinExpr::constant(0.0), LinExpr::constant(0.0)));
        assert_eq!(ve.closing_pair(), (2, 6));
    }

    #[test]
    fn quadrilateral() {
        let ve = vertex_expressions(4).unwrap();
        assert_eq!(ve.vertex(4), &(LinExpr::constant(0.0), LinExpr::constant(0.0)));
        assert_eq!(ve.vertex(2), &(LinExpr::constant(0.0), LinExpr::constant(1.0)));
        // v1 = w0 = (-x1, y1), v3 = u0 = (x1, y1)
        assert_eq!(ve.vertex(1), &(lin(&[(X(1), -1.0)]), lin(&[(Y(1), 1.0)])));
        assert_eq!(ve.vertex(3), &(lin(&[(X(1), 1.0)]), lin(&[(Y(1), 1.0)])));
        let mut a4 = QuadExpr::default();
        a4.add_lin(X(1), 1.0);
        assert_eq!(ve.area_objective(), a4);
        assert_eq!(area_objective(4).unwrap(), a4);
    }

    #[test]
    fn bad_n() {
        for n in [0, 2, 3, 7, 9] {
            assert!(vertex_expressions(n).is_err());
        }
    }

    #[test]
    fn closing_pair_matches_quarter_formula() {
        for n in (4..=60).step_by(2) {
            let ve = vertex_expressions(n).unwrap();
            assert_eq!(ve.closing_pair(), (n / 4, (3 * n).div_ceil(4)), "n = {n}");
        }
    }

    #[test]
    fn decagon_neighbours_of_pendant() {
        let ve = vertex_expressions(10).unwrap();
        assert_eq!(ve.vertex(4), &(lin(&[(X(1), -1.0)]), lin(&[(Y(1), 1.0)])));
        assert_eq!(ve.vertex(6), &(lin(&[(X(1), 1.0)]), lin(&[(Y(1), 1.0)])));
    }

    #[test]
    fn structural_edges_are_single_circles() {
        for n in (6..=20).step_by(2) {
            let ve = vertex_expressions(n).unwrap();
            let mut used = Vec::new();
            for (i, j) in ve.structural_edges() {
                if (i, j) == (n / 2, n) {
                    assert_eq!(ve.dist_sq(i, j), QuadExpr::constant(1.0));
                    continue;
                }
                let k = ve.edge_variable(i, j).unwrap_or_else(|| {
                    panic!("n={n}: edge ({i},{j}) is {}", ve.dist_sq(i, j))
                });
                used.push(k);
            }
            // origin edges both use pair 1; every other pair is used once
            used.sort_unstable();
            let mut want: Vec<u16> = (1..=(n - 3) as u16).collect();
            want.insert(0, 1);
            assert_eq!(used, want, "n = {n}");
        }
    }
}
