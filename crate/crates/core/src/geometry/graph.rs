use std::collections::BTreeSet;

use super::Polygon;
use crate::error::{Error, Result};

/// Candidate solutions are accurate to about 1e-7, so unit-distance pairs are
/// detected with this slack on the squared distance.
pub const DEFAULT_GRAPH_TOL: f64 = 1e-6;

/// Unit-distance graph on polygon vertices (0-based vertex indices).
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub tol: f64,
}

impl DiameterGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, tol: f64) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        Self { n, edges, tol }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Collects every vertex pair whose squared distance is within `tol` of 1.
pub fn diameter_graph(p: &Polygon, tol: f64) -> Result<DiameterGraph> {
    let v = p.vertices();
    let mut edges = BTreeSet::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = v[i].dist_sq(v[j]);
            if d > 1.0 + tol {
                return Err(Error::NotSmall { i, j, dist_sq: d });
            }
            if (d - 1.0).abs() <= tol {
                edges.insert((i, j));
            }
        }
    }
    Ok(DiameterGraph {
        n: v.len(),
        edges,
        tol,
    })
}

/// True iff the graph is an `(n-1)`-cycle plus one pendant edge reaching the
/// remaining vertex.
pub fn check_graham_configuration(g: &DiameterGraph) -> bool {
    let n = g.n;
    if n < 4 || n % 2 != 0 || g.edges.len() != n {
        return false;
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let leaves: Vec<usize> = (0..n).filter(|&v| degrees[v] == 1).collect();
    if leaves.len() != 1 {
        return false;
    }
    let leaf = leaves[0];
    let hub = g.neighbours(leaf).next().expect("leaf has a neighbour");
    for v in 0..n {
        let want = if v == leaf {
            1
        } else if v == hub {
            3
        } else {
            2
        };
        if degrees[v] != want {
            return false;
        }
    }
    // walk the cycle from the hub without using the pendant edge
    let mut prev = hub;
    let mut cur = match g.neighbours(hub).find(|&w| w != leaf) {
        Some(w) => w,
        None => return false,
    };
    let mut seen = 1;
    while cur != hub {
        let next = g.neighbours(cur).find(|&w| w != prev);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
                seen += 1;
            }
            None => return false,
        }
        if seen > n {
            return false;
        }
    }
    seen == n - 1
}
