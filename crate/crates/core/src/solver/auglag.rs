//! Powell–Hestenes–Rockafellar augmented Lagrangian around the bound-constrained
//! BFGS inner solver. Maximizes the objective by minimizing its negation.

use super::bfgs;
use super::smooth::SmoothProblem;

#[derive(Debug, Clone)]
pub(crate) struct AlOutcome {
    pub x: Vec<f64>,
}

pub(crate) fn augmented_lagrangian(
    sp: &SmoothProblem,
    x0: &[f64],
    max_outer: usize,
    tol: f64,
) -> AlOutcome {
    let cons = &sp.constraints;
    let dim = sp.dim();
    let lo = sp.lower.clone();
    let hi: Vec<f64> = sp.upper.iter().map(|u| u.min(1.0 - sp.clamp)).collect();
    let mut x = x0.to_vec();
    sp.project(&mut x);

    let mut mult = vec![0.0; cons.len()];
    let mut rho = 10.0;
    let mut prev = f64::INFINITY;
    let mut outer = 0;
    while outer < max_outer {
        outer += 1;
        let gtol = (1e-3 * 0.1f64.powi(outer as i32)).max(1e-11);
        let merit = |z: &[f64], g: &mut [f64]| -> f64 {
            let m = sp.manifold(z);
            g.iter_mut().for_each(|v| *v = 0.0);
            let mut val = -sp.objective.value(&m);
            sp.objective.add_grad(&m, -1.0, g);
            for (c, &l) in cons.iter().zip(&mult) {
                let cv = c.f.value(&m);
                if c.equality {
                    val += -l * cv + 0.5 * rho * cv * cv;
                    c.f.add_grad(&m, -l + rho * cv, g);
                } else {
                    let s = (l - rho * cv).max(0.0);
                    val += (s * s - l * l) / (2.0 * rho);
                    if s > 0.0 {
                        c.f.add_grad(&m, -s, g);
                    }
                }
            }
            val
        };
        let inner = bfgs::minimize(merit, &x, &lo, &hi, gtol, 400 + 40 * dim);
        x = inner.x;

        let m = sp.manifold(&x);
        let mut violation = 0.0f64;
        let mut complementarity = 0.0f64;
        for (c, l) in cons.iter().zip(mult.iter_mut()) {
            let cv = c.f.value(&m);
            if c.equality {
                violation = violation.max(cv.abs());
                *l -= rho * cv;
            } else {
                violation = violation.max((-cv).max(0.0));
                complementarity = complementarity.max(cv.min(*l / rho).abs());
                *l = (*l - rho * cv).max(0.0);
            }
        }
        let progress = violation.max(complementarity);
        if violation <= tol && inner.projected_grad <= 1e-9 {
            break;
        }
        if progress > 0.25 * prev {
            rho = (rho * 10.0).min(1e10);
        }
        prev = progress;
    }
    AlOutcome { x }
}
