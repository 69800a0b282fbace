use maxpoly::formulation::{
    apply_sigma, build_program, evaluate, Assignment, ProgramOptions,
};
use maxpoly::geometry::upper_bound_area;
use maxpoly::solver::{kkt_residual, polish, solve, SolveResult, SolverConfig};

// Optima of the area program computed independently (SLSQP at 1e-15, many starts).
const ORACLE: [(usize, f64); 5] = [
    (8, 0.7268684827516),
    (10, 0.7491373458778),
    (12, 0.7607298734488),
    (14, 0.7675310111207),
    (16, 0.7718613219806),
];

fn run(n: usize, symmetric: bool) -> SolveResult {
    let opts = ProgramOptions {
        symmetric,
        ..ProgramOptions::for_n(n)
    };
    let p = build_program(n, opts).unwrap();
    solve(&p, &SolverConfig::default()).unwrap()
}

fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

#[test]
fn reaches_oracle_optima() {
    for (n, want) in ORACLE {
        for sym in [true, false] {
            let t = std::time::Instant::now();
            let r = run(n, sym);
            eprintln!(
                "n={n} sym={sym} obj={:.13} viol={:e} kkt={:e} start={} conv={} {:?}",
                r.objective,
                r.max_violation,
                r.kkt_residual,
                r.winning_start,
                r.starts.iter().filter(|s| (s.objective - want).abs() < 1e-9).count(),
                t.elapsed()
            );
            assert!((r.objective - want).abs() < 1e-10, "n={n} sym={sym}");
            assert!(r.max_violation <= 1e-10);
            assert!(r.objective <= upper_bound_area(n).unwrap() + 1e-9);
        }
    }
}

#[test]
fn octagon_matches_published_point_up_to_reflection() {
    let r = run(8, false);
    let published = [0.26214172, 0.67123417, 0.67123381, 0.90909242, 0.90909213];
    assert!((r.objective - 0.72686848).abs() < 1e-6);
    let mirrored = apply_sigma(&r.best, 8).unwrap();
    let d = inf_dist(&r.best.x, &published).min(inf_dist(&mirrored.x, &published));
    assert!(d < 1e-4, "distance {d}");
}

#[test]
fn symmetric_decagon_and_tetradecagon() {
    let r = run(10, true);
    assert!((r.objective - 0.74913735).abs() < 1e-6);
    // The published coordinates carry about 2e-6 of solver noise.
    let published = [0.21101121, 0.54864181, 0.78292327, 0.94529267];
    assert!(inf_dist(&r.best.x, &published) < 1e-5);

    let r = run(14, true);
    assert!((r.objective - 0.76753100).abs() < 1e-5);
}

#[test]
fn deterministic_across_runs_and_thread_counts() {
    let p = build_program(10, ProgramOptions::default()).unwrap();
    let c = SolverConfig {
        starts: 12,
        ..Default::default()
    };
    let a = solve(&p, &c).unwrap();
    let b = solve(&p, &c).unwrap();
    let one = solve(&p, &SolverConfig { threads: Some(1), ..c.clone() }).unwrap();
    assert_eq!(a.best, b.best);
    assert_eq!(a.starts, b.starts);
    assert_eq!(a.best, one.best);
    assert_eq!(a.winning_start, one.winning_start);
    // The reported objective is exactly what evaluation gives.
    assert_eq!(evaluate(&p, &a.best).unwrap().objective, a.objective);
}

#[test]
fn polish_recovers_digits_of_truncated_decagon() {
    let p = build_program(10, ProgramOptions::default()).unwrap();
    let truncated = Assignment::from_x(vec![
        0.21101, 0.54864, 0.54864, 0.78293, 0.78292, 0.94529, 0.94529,
    ]);
    let out = polish(&p, &truncated).unwrap();
    assert!(!out.no_progress);
    assert!(out.max_violation <= 1e-12);
    assert!((out.objective - ORACLE[1].1).abs() < 1e-9);
    // The two-sided bracket value rounds to the same optimum.
    assert!((out.objective - 0.74913736).abs() < 2e-8);

    let again = polish(&p, &out.assignment).unwrap();
    assert!(!again.no_progress);
    assert!(inf_dist(&again.assignment.x, &out.assignment.x) < 1e-14);
}

#[test]
fn polish_refuses_far_infeasible_points() {
    let p = build_program(10, ProgramOptions::default()).unwrap();
    // x1 = 0.8 breaks the box by 0.3.
    let bad = Assignment::from_x(vec![0.8, 0.55, 0.55, 0.78, 0.78, 0.95, 0.95]);
    let out = polish(&p, &bad).unwrap();
    assert!(out.no_progress);
    assert_eq!(out.assignment, bad);
}

#[test]
fn kkt_residual_cases() {
    let p = build_program(8, ProgramOptions::for_n(8)).unwrap();
    let published = Assignment::from_x(vec![
        0.26214172, 0.67123417, 0.67123381, 0.90909242, 0.90909213,
    ]);
    assert!(kkt_residual(&p, &published).unwrap() <= 1e-6);

    // Interior point: nothing active, so the residual is the gradient itself.
    let p4 = build_program(4, ProgramOptions::default()).unwrap();
    let q = build_program(4, ProgramOptions { relax_closing_edge: true, ..Default::default() }).unwrap();
    let interior = Assignment::from_x(vec![0.3]);
    assert!((kkt_residual(&q, &interior).unwrap() - 1.0).abs() < 1e-15);
    assert!(kkt_residual(&p4, &Assignment::from_x(vec![0.5])).unwrap() <= 1e-12);
    assert!(kkt_residual(&p4, &interior).is_err());
}

mod gradients {
    use maxpoly::formulation::{build_program, ProgramOptions};
    use maxpoly::solver::smooth::SmoothProblem;
    use proptest::prelude::*;

    fn close(fd: f64, an: f64) -> bool {
        (fd - an).abs() <= 1e-5 * an.abs().max(1.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn analytic_matches_central_differences(
            x in proptest::collection::vec(0.05f64..0.95, 9),
        ) {
            let p = build_program(12, ProgramOptions::default()).unwrap();
            let sp = SmoothProblem::new(&p, 1e-12);
            let h = 1e-6;
            let m = sp.manifold(&x);
            let fns = std::iter::once(&sp.objective).chain(sp.constraints.iter().map(|c| &c.f));
            for f in fns {
                let g = f.grad(&m);
                for j in 0..x.len() {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += h;
                    xm[j] -= h;
                    let fd = (f.value(&sp.manifold(&xp)) - f.value(&sp.manifold(&xm))) / (2.0 * h);
                    prop_assert!(close(fd, g[j]), "component {j}: {fd} vs {}", g[j]);
                }
            }
        }
    }
}
