//! Published reference values for the largest small polygons, used by the
//! reproduction command and the acceptance suite.
//!
//! Coordinates are as published (eight significant digits); they carry a few
//! units of solver noise in the last digits, so compare against them with the
//! row tolerance rather than exactly.

use serde::Serialize;

/// Version of this table; bump when entries change.
pub const TABLE_VERSION: &str = "maxpoly-reference/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Published {
    pub n: usize,
    pub symmetric: bool,
    /// Published optimal area.
    pub objective: f64,
    /// Accepted distance between a reproduced optimum and `objective`.
    pub tolerance: f64,
    /// Published optimizer in the program's own variables, when given.
    pub x: Option<&'static [f64]>,
    /// Moment count (constant excluded) and moment-matrix size at order 2.
    pub relaxation: Option<(usize, usize)>,
    pub source: &'static str,
}

/// The eight reproduction rows: symmetric n = 8..16, full n = 8, 10, 12.
pub const PUBLISHED: &[Published] = &[
    Published {
        n: 8,
        symmetric: true,
        objective: 0.72686848,
        tolerance: 1e-6,
        x: None,
        relaxation: None,
        source: "octagon optimum (no separate symmetric value published)",
    },
    Published {
        n: 10,
        symmetric: true,
        objective: 0.74913735,
        tolerance: 1e-6,
        x: Some(&[0.21101121, 0.54864181, 0.78292327, 0.94529267]),
        relaxation: Some((320, 41)),
        source: "symmetric decagon, second relaxation with substitutions",
    },
    Published {
        n: 12,
        symmetric: true,
        objective: 0.76072986,
        tolerance: 1e-6,
        x: Some(&[0.17616079, 0.46150096, 0.67622897, 0.85319926, 0.96231045]),
        relaxation: Some((680, 61)),
        source: "symmetric dodecagon, second relaxation with substitutions",
    },
    Published {
        n: 14,
        symmetric: true,
        objective: 0.76753100,
        tolerance: 1e-5,
        x: Some(&[0.15100047, 0.39733106, 0.59117050, 0.76441599, 0.89237421, 0.97279813]),
        relaxation: None,
        source: "symmetric tetradecagon",
    },
    Published {
        n: 16,
        symmetric: true,
        objective: 0.77185969,
        tolerance: 1e-5,
        x: Some(&[
            0.13204787, 0.34840959, 0.52343183, 0.68719098, 0.81912908, 0.91836386, 0.97935563,
        ]),
        relaxation: None,
        source: "symmetric hexadecagon",
    },
    Published {
        n: 8,
        symmetric: false,
        objective: 0.72686848,
        tolerance: 1e-6,
        x: Some(&[0.26214172, 0.67123417, 0.67123381, 0.90909242, 0.90909213]),
        relaxation: None,
        source: "octagon, second relaxation",
    },
    Published {
        n: 10,
        symmetric: false,
        objective: 0.74913736,
        tolerance: 5e-6,
        x: Some(&[
            0.21101191, 0.54864468, 0.54864311, 0.78292524, 0.78292347, 0.94529290, 0.94529183,
        ]),
        relaxation: Some((2240, 113)),
        source: "decagon, second relaxation",
    },
    Published {
        n: 12,
        symmetric: false,
        objective: 0.76072988,
        tolerance: 5e-6,
        x: Some(&[
            0.17616131, 0.46150224, 0.46150519, 0.67623091, 0.67623301, 0.85320300, 0.85320328,
            0.96231370, 0.96231344,
        ]),
        relaxation: Some((5640, 181)),
        source: "dodecagon, second relaxation",
    },
];

/// Published `(lower, upper)` brackets on the optimal area.
pub const PUBLISHED_BRACKETS: &[(usize, f64, f64)] = &[
    (14, 0.76753100, 0.76893595),
    (16, 0.77185969, 0.77279135),
];

/// Rigorous two-sided enclosures obtained with verified SDP bounds.
pub const VERIFIED_ENCLOSURES: &[(usize, bool, f64, f64)] = &[
    (8, false, 0.72686845, 0.72686849),
    (10, true, 0.74913721, 0.74913740),
];

pub fn published(n: usize, symmetric: bool) -> Option<&'static Published> {
    PUBLISHED.iter().find(|p| p.n == n && p.symmetric == symmetric)
}
