//! Deterministic multistart local optimization of the area program.
//!
//! `y` is eliminated through `y_i = sqrt(1 - x_i^2)`, leaving a smooth problem
//! in `x` with simple bounds, pairwise inequalities and the closing-edge
//! equality. Each start runs an augmented-Lagrangian loop and is then polished
//! by Newton's method on its active constraints.

mod auglag;
mod bfgs;
mod kkt;
mod result;
pub mod smooth;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulation::{evaluate, Assignment, QuadraticProgram};
use smooth::SmoothProblem;

pub use result::{SolveResultJson, RESULT_VERSION};

/// Amplitude of the uniform perturbation applied to every non-base seed.
pub const SEED_AMPLITUDE: f64 = 0.15;

/// Largest constraint violation `polish` accepts as input.
pub const POLISH_MAX_INPUT_VIOLATION: f64 = 1e-4;
/// Violation `polish` must reach to count as progress.
pub const POLISH_TARGET_VIOLATION: f64 = 1e-12;
/// Constraints within this distance of their boundary count as active in the KKT fit.
pub const KKT_ACTIVE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub starts: usize,
    pub rng_seed: u64,
    pub max_outer_iterations: usize,
    pub feasibility_tol: f64,
    pub kkt_tol: f64,
    pub x_interior_clamp: f64,
    /// Worker threads; `None` uses the global pool. Not serialized: it
    /// cannot change the result, and documents must not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            rng_seed: 0,
            max_outer_iterations: 40,
            feasibility_tol: 1e-10,
            kkt_tol: 1e-8,
            x_interior_clamp: 1e-12,
            threads: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::domain("starts must be at least 1"));
        }
        if self.max_outer_iterations == 0 {
            return Err(Error::domain("max_outer_iterations must be at least 1"));
        }
        for (name, v) in [
            ("feasibility_tol", self.feasibility_tol),
            ("kkt_tol", self.kkt_tol),
            ("x_interior_clamp", self.x_interior_clamp),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.x_interior_clamp >= 0.5 {
            return Err(Error::domain("x_interior_clamp must be below 1/2"));
        }
        if self.threads == Some(0) {
            return Err(Error::domain("threads must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartStatus {
    /// Feasible and stationary to `kkt_tol`.
    Converged,
    /// Feasible, but the stationarity residual stayed above `kkt_tol`.
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartLog {
    pub start: usize,
    pub objective: f64,
    pub max_violation: f64,
    pub status: StartStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub n: usize,
    pub symmetric: bool,
    /// In the program's own variables (reduced when the program is symmetric).
    pub best: Assignment,
    pub objective: f64,
    pub max_violation: f64,
    pub kkt_residual: f64,
    pub winning_start: usize,
    pub starts: Vec<StartLog>,
    pub config: SolverConfig,
}

fn sine_seed(n: usize) -> Vec<f64> {
    // Full variable k sits at rank floor(k / 2) of the half-polygon; spacing the
    // ranks like a regular (n-1)-gon puts x1 small and later ranks near 1.
    (1..=n - 3)
        .map(|k| {
            let rank = (k / 2) as f64;
            (std::f64::consts::PI * (2.0 * rank + 1.0) / (2.0 * (n as f64 - 1.0))).sin()
        })
        .collect()
}

/// Start points in full form (`n - 3` coordinates).
///
/// Seed 0 is a regular-like configuration; seed `s > 0` adds independent
/// uniform noise of amplitude [`SEED_AMPLITUDE`] drawn from ChaCha8 keyed by
/// `rng_seed` on stream `s`, then clips to the box `[0, 1/2] x [0, 1]^{n-4}`.
pub fn initial_seeds(n: usize, count: usize, rng_seed: u64) -> Result<Vec<Assignment>> {
    crate::formulation::check_even_n(n)?;
    if count == 0 {
        return Err(Error::domain("seed count must be at least 1"));
    }
    let base = sine_seed(n);
    Ok((0..count)
        .map(|s| {
            if s == 0 {
                return Assignment::from_x(base.clone());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(s as u64);
            let x = base
                .iter()
                .enumerate()
                .map(|(k, &b)| {
                    let ub = if k == 0 { 0.5 } else { 1.0 };
                    let t = b + rng.random_range(-SEED_AMPLITUDE..=SEED_AMPLITUDE);
                    t.clamp(0.0, ub)
                })
                .collect();
            Assignment::from_x(x)
        })
        .collect())
}

fn program_form(p: &QuadraticProgram, a: &Assignment) -> Result<Assignment> {
    if p.symmetric() {
        a.to_reduced(p.n)
    } else {
        a.to_full(p.n)
    }
}

struct StartOutcome {
    x: Vec<f64>,
    objective: f64,
    max_violation: f64,
    kkt: f64,
}

fn run_start(p: &QuadraticProgram, sp: &SmoothProblem, x0: &[f64], c: &SolverConfig) -> StartOutcome {
    let al = auglag::augmented_lagrangian(sp, x0, c.max_outer_iterations, c.feasibility_tol * 0.1);
    let mut x = al.x;
    if let Some(xp) = kkt::newton_refine(sp, &x, 1e-4) {
        let before = evaluate(p, &Assignment::from_x(x.clone())).map(|r| r.max_violation);
        let after = evaluate(p, &Assignment::from_x(xp.clone())).map(|r| r.max_violation);
        if let (Ok(b), Ok(a)) = (before, after) {
            if a <= c.feasibility_tol || a <= b {
                x = xp;
            }
        }
    }
    match evaluate(p, &Assignment::from_x(x.clone())) {
        Ok(r) => StartOutcome {
            kkt: kkt::stationarity(sp, &x, KKT_ACTIVE_TOL),
            x,
            objective: r.objective,
            max_violation: r.max_violation,
        },
        Err(_) => StartOutcome {
            x,
            objective: f64::NEG_INFINITY,
            max_violation: f64::INFINITY,
            kkt: f64::INFINITY,
        },
    }
}

/// Best feasible local maximizer over all starts.
///
/// Starts run independently (in parallel); the winner is the highest objective,
/// with ties going to the lowest start index, so thread scheduling never
/// changes the result.
pub fn solve(p: &QuadraticProgram, c: &SolverConfig) -> Result<SolveResult> {
    c.validate()?;
    let sp = SmoothProblem::new(p, c.x_interior_clamp);
    let seeds = initial_seeds(p.n, c.starts, c.rng_seed)?
        .into_iter()
        .map(|a| program_form(p, &a).map(|a| a.x))
        .collect::<Result<Vec<_>>>()?;

    let run = || -> Vec<StartOutcome> {
        seeds.par_iter().map(|x0| run_start(p, &sp, x0, c)).collect()
    };
    let outcomes = match c.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let starts: Vec<StartLog> = outcomes
        .iter()
        .enumerate()
        .map(|(start, o)| StartLog {
            start,
            objective: o.objective,
            max_violation: o.max_violation,
            status: if o.max_violation > c.feasibility_tol {
                StartStatus::Infeasible
            } else if o.kkt > c.kkt_tol {
                StartStatus::Feasible
            } else {
                StartStatus::Converged
            },
        })
        .collect();

    let winner = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.max_violation <= c.feasibility_tol)
        .fold(None::<(usize, &StartOutcome)>, |best, (i, o)| match best {
            Some((_, b)) if b.objective >= o.objective => best,
            _ => Some((i, o)),
        });
    let Some((winning_start, w)) = winner else {
        let best_violation = outcomes
            .iter()
            .map(|o| o.max_violation)
            .fold(f64::INFINITY, f64::min);
        return Err(Error::Infeasible {
            starts: c.starts,
            best_violation,
        });
    };
    Ok(SolveResult {
        n: p.n,
        symmetric: p.symmetric(),
        best: Assignment::from_x(w.x.clone()),
        objective: w.objective,
        max_violation: w.max_violation,
        kkt_residual: w.kkt,
        winning_start,
        starts,
        config: c.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polished {
    pub assignment: Assignment,
    /// Set when the input was returned unchanged.
    pub no_progress: bool,
    pub objective: f64,
    pub max_violation: f64,
}

/// Newton refinement of a near-feasible point on its active constraints.
///
/// Inputs violating some constraint by more than
/// [`POLISH_MAX_INPUT_VIOLATION`], singular active-set Jacobians and refinements
/// that miss [`POLISH_TARGET_VIOLATION`] all return the input with `no_progress`.
/// Any given `y` is ignored; `y` is re-derived from `x`.
pub fn polish(p: &QuadraticProgram, a: &Assignment) -> Result<Polished> {
    let input = evaluate(p, a)?;
    let unchanged = || Polished {
        assignment: a.clone(),
        no_progress: true,
        objective: input.objective,
        max_violation: input.max_violation,
    };
    if input.max_violation > POLISH_MAX_INPUT_VIOLATION {
        return Ok(unchanged());
    }
    let sp = SmoothProblem::new(p, SolverConfig::default().x_interior_clamp);
    let Some(x) = kkt::newton_refine(&sp, &a.x, 10.0 * POLISH_MAX_INPUT_VIOLATION) else {
        return Ok(unchanged());
    };
    let out = Assignment::from_x(x);
    match evaluate(p, &out) {
        Ok(r) if r.max_violation <= POLISH_TARGET_VIOLATION => Ok(Polished {
            assignment: out,
            no_progress: false,
            objective: r.objective,
            max_violation: r.max_violation,
        }),
        _ => Ok(unchanged()),
    }
}

/// Infinity norm of the Lagrangian gradient with least-squares multipliers on
/// the constraints within [`KKT_ACTIVE_TOL`] of their boundary (inequalities
/// with negative multipliers are released). Requires violation at most `1e-6`.
pub fn kkt_residual(p: &QuadraticProgram, a: &Assignment) -> Result<f64> {
    let r = evaluate(p, a)?;
    if r.max_violation > 1e-6 {
        return Err(Error::domain(format!(
            "KKT residual needs a point feasible to 1e-6, violation is {:e}",
            r.max_violation
        )));
    }
    let sp = SmoothProblem::new(p, SolverConfig::default().x_interior_clamp);
    Ok(kkt::stationarity(&sp, &a.x, KKT_ACTIVE_TOL))
}
