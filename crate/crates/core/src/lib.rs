//! Largest small polygons with an even number of vertices.
//!
//! A *small polygon* is a convex polygon of unit diameter. For even `n` the
//! maximal-area small `n`-gon has a diameter graph made of an `(n-1)`-cycle
//! plus one pendant edge, which turns the search into a single nonconvex
//! quadratic program. This crate provides:
//!
//! - [`geometry`]: polygons, shoelace area, diameter graphs, analytic bounds, SVG.
//! - [`formulation`]: the quadratic program built from the vertex construction,
//!   its symmetry-reduced variant and the reflection substitution.
//! - [`solver`]: deterministic multistart augmented-Lagrangian solving with
//!   active-set Newton polishing and KKT residuals.
//! - [`cert`]: outward-rounded interval arithmetic and certified lower bounds.
//! - [`relaxation`]: moment relaxations with circle substitutions, SDPA export
//!   and extraction from imported moment vectors.
//! - [`reference`]: published reference values used by the reproduction suite.

pub mod cert;
pub mod error;
pub mod formulation;
pub mod geometry;
pub mod reference;
pub mod relaxation;
pub mod solver;

pub use error::{Error, Result};
