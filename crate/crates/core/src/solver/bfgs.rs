//! Projected BFGS for smooth objectives under simple bounds.

#[derive(Debug, Clone)]
pub(crate) struct BfgsOutcome {
    pub x: Vec<f64>,
    pub projected_grad: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn project(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for j in 0..x.len() {
        x[j] = x[j].max(lo[j]).min(hi[j]);
    }
}

fn projected_grad_norm(x: &[f64], g: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    (0..x.len())
        .map(|j| (x[j] - (x[j] - g[j]).max(lo[j]).min(hi[j])).abs())
        .fold(0.0, f64::max)
}

/// Minimizes `f` over the box `[lo, hi]`.
///
/// Variables sitting on a bound with the gradient pushing outward are frozen
/// for the step; the inverse Hessian approximation is dense.
pub(crate) fn minimize(
    mut f: impl FnMut(&[f64], &mut [f64]) -> f64,
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    gtol: f64,
    max_iter: usize,
) -> BfgsOutcome {
    let dim = x0.len();
    let mut x = x0.to_vec();
    project(&mut x, lo, hi);
    let mut g = vec![0.0; dim];
    let mut fx = f(&x, &mut g);
    let mut h = vec![0.0; dim * dim];
    let reset = |h: &mut [f64], s: f64| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..dim {
            h[i * dim + i] = s;
        }
    };
    reset(&mut h, 1.0);
    let mut fresh = true;

    let mut xn = vec![0.0; dim];
    let mut gn = vec![0.0; dim];
    let mut d = vec![0.0; dim];
    let mut iterations = 0;
    while iterations < max_iter {
        if projected_grad_norm(&x, &g, lo, hi) < gtol {
            break;
        }
        iterations += 1;
        let free: Vec<bool> = (0..dim)
            .map(|j| !((x[j] <= lo[j] && g[j] > 0.0) || (x[j] >= hi[j] && g[j] < 0.0)))
            .collect();
        for i in 0..dim {
            d[i] = if free[i] {
                -(0..dim)
                    .filter(|&j| free[j])
                    .map(|j| h[i * dim + j] * g[j])
                    .sum::<f64>()
            } else {
                0.0
            };
        }
        if dot(&g, &d) >= 0.0 {
            reset(&mut h, 1.0);
            fresh = true;
            for i in 0..dim {
                d[i] = if free[i] { -g[i] } else { 0.0 };
            }
        }

        let mut t = 1.0;
        let mut accepted = false;
        let mut fnew = fx;
        while t > 1e-20 {
            for i in 0..dim {
                xn[i] = x[i] + t * d[i];
            }
            project(&mut xn, lo, hi);
            let step: Vec<f64> = (0..dim).map(|i| xn[i] - x[i]).collect();
            let decrease = dot(&g, &step);
            fnew = f(&xn, &mut gn);
            if fnew.is_finite() && fnew <= fx + 1e-4 * decrease {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            if fresh {
                break;
            }
            reset(&mut h, 1.0);
            fresh = true;
            continue;
        }

        let s: Vec<f64> = (0..dim).map(|i| xn[i] - x[i]).collect();
        let yv: Vec<f64> = (0..dim).map(|i| gn[i] - g[i]).collect();
        let sy = dot(&s, &yv);
        let yy = dot(&yv, &yv);
        if sy > 1e-14 * dot(&s, &s).sqrt() * yy.sqrt() && sy > 0.0 {
            if fresh {
                reset(&mut h, sy / yy);
                fresh = false;
            }
            // H <- (I - r s y')H(I - r y s') + r s s'
            let r = 1.0 / sy;
            let hy: Vec<f64> = (0..dim)
                .map(|i| (0..dim).map(|j| h[i * dim + j] * yv[j]).sum())
                .collect();
            let yhy = dot(&yv, &hy);
            for i in 0..dim {
                for j in 0..dim {
                    h[i * dim + j] += -r * (s[i] * hy[j] + hy[i] * s[j])
                        + (r * r * yhy + r) * s[i] * s[j];
                }
            }
        }
        let small_step = s.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-16;
        x.copy_from_slice(&xn);
        g.copy_from_slice(&gn);
        let df = fx - fnew;
        fx = fnew;
        if small_step && df.abs() <= 1e-18 * (1.0 + fx.abs()) {
            break;
        }
    }
    BfgsOutcome {
        projected_grad: projected_grad_norm(&x, &g, lo, hi),
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64], g: &mut [f64]| {
            let (a, b) = (x[0], x[1]);
            g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
            g[1] = 200.0 * (b - a * a);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let out = minimize(f, &[-1.2, 1.0], &[-5.0, -5.0], &[5.0, 5.0], 1e-10, 500);
        assert!((out.x[0] - 1.0).abs() < 1e-7 && (out.x[1] - 1.0).abs() < 1e-7, "{out:?}");
    }

    #[test]
    fn active_bound() {
        // min (x - 2)^2 + (y + 1)^2 on [0,1]^2 -> (1, 0)
        let f = |x: &[f64], g: &mut [f64]| {
            g[0] = 2.0 * (x[0] - 2.0);
            g[1] = 2.0 * (x[1] + 1.0);
            (x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2)
        };
        let out = minimize(f, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], 1e-12, 100);
        assert_eq!(out.x, vec![1.0, 0.0]);
        assert!(out.projected_grad < 1e-12);
    }
}
