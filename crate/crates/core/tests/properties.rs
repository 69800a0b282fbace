//! Algebraic invariants of the formulation and the moment substitution.

use maxpoly::formulation::{
    apply_sigma, build_program, evaluate, vertex_expressions, Assignment, ProgramOptions, Var,
};
use maxpoly::relaxation::{build_relaxation, moments_from_point, BlockKind};
use proptest::prelude::*;

fn full_assignment(n: usize) -> impl Strategy<Value = Assignment> {
    (0.0f64..=0.5, proptest::collection::vec(0.0f64..=1.0, n - 4)).prop_map(|(x1, rest)| {
        let mut x = vec![x1];
        x.extend(rest);
        Assignment::from_x(x)
    })
}

fn sized_full() -> impl Strategy<Value = (usize, Assignment)> {
    (3usize..=10).prop_flat_map(|h| {
        let n = 2 * h;
        full_assignment(n).prop_map(move |a| (n, a))
    })
}

fn lookup(a: &Assignment) -> impl Fn(Var) -> f64 + '_ {
    let y = a.y_values().unwrap();
    move |v| match v {
        Var::X(k) => a.x[k as usize - 1],
        Var::Y(k) => y[k as usize - 1],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_area_formulas_agree((n, a) in sized_full()) {
        let ve = vertex_expressions(n).unwrap();
        let val = lookup(&a);
        let obj = ve.area_objective().eval(&val);
        let shoe = ve.area_full_shoelace().eval(&val);
        let trap = ve.area_trapezoid().eval(&val);
        prop_assert!((obj - shoe).abs() < 1e-12 && (obj - trap).abs() < 1e-12);
    }

    #[test]
    fn reflection_preserves_objective_and_residuals((n, a) in sized_full()) {
        let p = build_program(n, ProgramOptions::default()).unwrap();
        let r = evaluate(&p, &a).unwrap();
        let s = evaluate(&p, &apply_sigma(&a, n).unwrap()).unwrap();
        prop_assert!((r.objective - s.objective).abs() < 1e-12);
        let sorted = |rep: &maxpoly::formulation::EvalReport| {
            let mut v: Vec<f64> = rep.residuals.iter().map(|q| q.value).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        for (u, w) in sorted(&r).iter().zip(sorted(&s)) {
            prop_assert!((u - w).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_program_is_the_full_program_on_the_diagonal((n, a) in sized_full()) {
        let reduced = a.to_reduced(n).unwrap();
        let full = reduced.to_full(n).unwrap();
        let p = build_program(n, ProgramOptions::default()).unwrap();
        let q = build_program(n, ProgramOptions::symmetric()).unwrap();
        let rf = evaluate(&p, &full).unwrap();
        let rq = evaluate(&q, &reduced).unwrap();
        prop_assert!((rf.objective - rq.objective).abs() < 1e-12);
        prop_assert!((rf.max_violation - rq.max_violation).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Block entries are the substituted products; on the circle they must
    /// equal the unsubstituted products evaluated directly.
    #[test]
    fn substitution_is_sound_on_the_circle(a in full_assignment(8)) {
        let p = build_program(8, ProgramOptions::default()).unwrap();
        let s = build_relaxation(&p, 2).unwrap();
        let mom = moments_from_point(&s, &a).unwrap();
        let val = lookup(&a);
        let values: Vec<f64> = s.variables.iter().map(|&v| val(v)).collect();
        let basis = &s.moments.monomials;
        for b in &s.blocks {
            let m = b.matrix(&mom);
            for (i, j, _) in &b.entries {
                let want = match b.kind {
                    BlockKind::Moment => basis[*i].eval(&values) * basis[*j].eval(&values),
                    BlockKind::Localizing => {
                        let g = p.constraint(&b.tag).unwrap().expr.eval(&val);
                        g * basis[*i].eval(&values) * basis[*j].eval(&values)
                    }
                    BlockKind::Equality => continue,
                };
                prop_assert!((m[(*i, *j)] - want).abs() < 1e-12, "{} ({i},{j})", b.tag);
            }
        }
        // The objective form is linear in the moments and equals the area.
        let area = evaluate(&p, &a).unwrap().objective;
        prop_assert!((s.objective.eval(&mom) - area).abs() < 1e-12);
    }
}
