//! Least-squares multiplier estimates and Newton refinement on an active set.

use nalgebra::{DMatrix, DVector};

use super::smooth::{SmoothConstraint, SmoothProblem};

/// Multipliers `lambda` minimizing `|grad f + sum lambda_i grad c_i|` over the
/// given active set. Inequalities with negative multipliers leave the set one at
/// a time, most negative first. Returns the kept set, its multipliers and the
/// residual vector.
pub(crate) fn fit_multipliers(
    grad_f: &[f64],
    grads: &[Vec<f64>],
    equality: &[bool],
    mut active: Vec<usize>,
) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let dim = grad_f.len();
    let g = DVector::from_column_slice(grad_f);
    loop {
        if active.is_empty() {
            return (active, Vec::new(), grad_f.to_vec());
        }
        let jt = DMatrix::from_fn(dim, active.len(), |r, c| grads[active[c]][r]);
        let svd = jt.clone().svd(true, true);
        let lambda = svd
            .solve(&(-&g), 1e-12 * svd.singular_values.max().max(1.0))
            .expect("U and V were computed");
        let worst = active
            .iter()
            .zip(lambda.iter())
            .filter(|(&i, _)| !equality[i])
            .min_by(|a, b| a.1.total_cmp(b.1))
            .filter(|(_, &l)| l < 0.0)
            .map(|(&i, _)| i);
        match worst {
            Some(i) => active.retain(|&k| k != i),
            None => {
                let r = &g + &jt * &lambda;
                return (active, lambda.iter().copied().collect(), r.iter().copied().collect());
            }
        }
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, t| m.max(t.abs()))
}

/// Stationarity residual over constraints within `active_tol` of their boundary.
pub(crate) fn stationarity(sp: &SmoothProblem, x: &[f64], active_tol: f64) -> f64 {
    let m = sp.manifold(x);
    let cons: Vec<&SmoothConstraint> = sp.all_constraints().collect();
    let grads: Vec<Vec<f64>> = cons.iter().map(|c| c.f.grad(&m)).collect();
    let equality: Vec<bool> = cons.iter().map(|c| c.equality).collect();
    let active = cons
        .iter()
        .enumerate()
        .filter(|(_, c)| c.equality || c.f.value(&m) <= active_tol)
        .map(|(i, _)| i)
        .collect();
    let (_, _, r) = fit_multipliers(&sp.objective.grad(&m), &grads, &equality, active);
    inf_norm(&r)
}

/// Newton's method on the KKT system of the constraints near the boundary.
///
/// Returns `None` when the active-set Jacobian is singular or the iteration
/// fails to settle into a consistent active set.
pub(crate) fn newton_refine(sp: &SmoothProblem, x0: &[f64], near_tol: f64) -> Option<Vec<f64>> {
    let dim = sp.dim();
    let cons: Vec<&SmoothConstraint> = sp.all_constraints().collect();
    let equality: Vec<bool> = cons.iter().map(|c| c.equality).collect();
    let mut x = x0.to_vec();

    let m = sp.manifold(&x);
    let candidates: Vec<usize> = (0..cons.len())
        .filter(|&i| equality[i] || cons[i].f.value(&m) <= near_tol)
        .collect();
    let grads: Vec<Vec<f64>> = cons.iter().map(|c| c.f.grad(&m)).collect();
    let (mut active, mut lambda, _) =
        fit_multipliers(&sp.objective.grad(&m), &grads, &equality, candidates);

    for _round in 0..10 {
        let k = active.len();
        if k > dim {
            return None;
        }
        let residual = |x: &[f64], lambda: &[f64]| -> (Vec<f64>, f64) {
            let m = sp.manifold(x);
            let mut r = sp.objective.grad(&m);
            for (&i, &l) in active.iter().zip(lambda) {
                cons[i].f.add_grad(&m, l, &mut r);
            }
            r.extend(active.iter().map(|&i| cons[i].f.value(&m)));
            let norm = inf_norm(&r);
            (r, norm)
        };
        let (mut r, mut norm) = residual(&x, &lambda);
        for _ in 0..40 {
            if norm < 1e-15 {
                break;
            }
            let m = sp.manifold(&x);
            let mut kkt = DMatrix::zeros(dim + k, dim + k);
            let mut h = DMatrix::zeros(dim, dim);
            sp.objective.add_hess(&m, 1.0, &mut h);
            for (&i, &l) in active.iter().zip(&lambda) {
                cons[i].f.add_hess(&m, l, &mut h);
            }
            kkt.view_mut((0, 0), (dim, dim)).copy_from(&h);
            for (c, &i) in active.iter().enumerate() {
                let gi = cons[i].f.grad(&m);
                for j in 0..dim {
                    kkt[(j, dim + c)] = gi[j];
                    kkt[(dim + c, j)] = gi[j];
                }
            }
            let rhs = -DVector::from_vec(r.clone());
            let step = kkt.lu().solve(&rhs)?;
            if step.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let mut t = 1.0;
            let mut improved = false;
            while t > 1e-6 {
                let xn: Vec<f64> = (0..dim).map(|j| x[j] + t * step[j]).collect();
                if xn.iter().any(|&v| v > 1.0 || v < -1.0) {
                    t *= 0.5;
                    continue;
                }
                let ln: Vec<f64> = (0..k).map(|c| lambda[c] + t * step[dim + c]).collect();
                let (rn, nn) = residual(&xn, &ln);
                if nn < norm || (nn <= 1e-14 && t == 1.0) {
                    x = xn;
                    lambda = ln;
                    r = rn;
                    norm = nn;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }

        // Settle the active set: release negative inequality multipliers,
        // take in newly violated constraints.
        let m = sp.manifold(&x);
        let release = active
            .iter()
            .zip(&lambda)
            .filter(|(&i, &l)| !equality[i] && l < 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(&i, _)| i);
        let violated = (0..cons.len())
            .filter(|i| !active.contains(i))
            .filter(|&i| cons[i].f.value(&m) < 0.0)
            .min_by(|&a, &b| cons[a].f.value(&m).total_cmp(&cons[b].f.value(&m)));
        match (release, violated) {
            (None, None) => return Some(x),
            (Some(i), _) => {
                let pos = active.iter().position(|&a| a == i).expect("active");
                active.remove(pos);
                lambda.remove(pos);
            }
            (None, Some(i)) => {
                active.push(i);
                lambda.push(0.0);
            }
        }
    }
    None
}
