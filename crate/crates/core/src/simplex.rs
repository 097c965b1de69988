//! Nelder-Mead downhill simplex.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop when the spread of simplex values is below `rel_tol · |f_best|`.
    pub rel_tol: f64,
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            rel_tol: 1e-5,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`, which is
/// how callers express constraints.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, &mut evals)).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let (best, worst) = (vals[0], vals[n]);
        if best.is_finite()
            && worst.is_finite()
            && (worst - best).abs() <= opts.rel_tol * best.abs().max(f64::MIN_POSITIVE)
        {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: Vec<f64> = (0..n)
            .map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + t * (pts[n][k] - centroid[k]))
                .collect()
        };
        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[n] {
            let xc = along(-0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < vals[n].min(fr) {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for i in 1..=n {
            let p: Vec<f64> = (0..n)
                .map(|k| pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]))
                .collect();
            vals[i] = eval(&p, &mut evals);
            pts[i] = p;
        }
    }
    let k = (0..=n)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap_or(0);
    SimplexResult {
        x: pts[k].clone(),
        value: vals[k],
        evaluations: evals,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x| (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0) + 3.0,
            &[0.0, 0.0],
            &SimplexOptions {
                max_iter: 500,
                rel_tol: 1e-12,
                initial_step: 0.5,
            },
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 2.0).abs() < 1e-4,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn respects_infinite_walls() {
        let r = minimize(
            |x| {
                if x[0] < 0.5 {
                    f64::INFINITY
                } else {
                    x[0] * x[0]
                }
            },
            &[2.0],
            &SimplexOptions {
                max_iter: 300,
                rel_tol: 1e-10,
                initial_step: 0.3,
            },
        );
        assert!(r.x[0] >= 0.5 && r.x[0] < 0.51, "{:?}", r.x);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| libm::cos(3.0 * x[0]) + x[1] * x[1];
        let o = SimplexOptions::default();
        assert_eq!(minimize(f, &[0.2, 0.4], &o), minimize(f, &[0.2, 0.4], &o));
    }
}
