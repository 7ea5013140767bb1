//! Derivative-free Nelder-Mead simplex minimizer with dimension-adaptive
//! coefficients.

/// Stopping rules for a single simplex run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Spread of objective values across the simplex.
    pub f_tol: f64,
    /// Simplex diameter (max vertex distance from the best vertex).
    pub x_tol: f64,
    /// Fallback initial edge length for zero coordinates.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            f_tol: 1e-10,
            x_tol: 1e-8,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub diameter: f64,
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as `+∞`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        let fx = eval(x0);
        return SimplexResult {
            x: Vec::new(),
            fx,
            iterations: 0,
            evaluations: 1,
            diameter: 0.0,
        };
    }

    let nf = n as f64;
    let (reflect, expand) = (1.0, 1.0 + 2.0 / nf);
    let contract = 0.75 - 1.0 / (2.0 * nf);
    let shrink = 1.0 - 1.0 / nf;

    let rms = (x0.iter().map(|v| v * v).sum::<f64>() / nf).sqrt();
    let base_step = if rms > 0.0 {
        0.1 * rms
    } else {
        opts.initial_step
    };
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        let step = if x0[i].abs() > 1e-6 {
            0.1 * x0[i]
        } else {
            base_step
        };
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    loop {
        sort_simplex(&mut simplex, &mut values);
        let diameter = diameter(&simplex);
        let spread = values[n] - values[0];
        let flat = spread <= opts.f_tol || (values[0] == f64::INFINITY && values[n] == f64::INFINITY);
        if (flat && diameter <= opts.x_tol) || iterations >= opts.max_iter {
            return SimplexResult {
                x: simplex.swap_remove(0),
                fx: values[0],
                iterations,
                evaluations,
                diameter,
            };
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = &simplex[n];
        along(&centroid, worst, reflect, &mut trial);
        let fr = eval(&trial);

        if fr < values[0] {
            along(&centroid, worst, expand, &mut trial2);
            let fe = eval(&trial2);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
        } else {
            let outside = fr < values[n];
            let coef = if outside { contract * reflect } else { -contract };
            along(&centroid, &simplex[n], coef, &mut trial2);
            let fc = eval(&trial2);
            if (outside && fc <= fr) || (!outside && fc < values[n]) {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for (v, fv) in simplex.iter_mut().zip(values.iter_mut()).skip(1) {
                    for (x, b) in v.iter_mut().zip(&best) {
                        *x = b + shrink * (*x - b);
                    }
                    *fv = eval(v);
                }
            }
        }
    }
}

/// `out = c + t (c - w)`.
fn along(c: &[f64], w: &[f64], t: f64, out: &mut [f64]) {
    for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
        *o = ci + t * (ci - wi);
    }
}

fn sort_simplex(simplex: &mut Vec<Vec<f64>>, values: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let s: Vec<Vec<f64>> = order.iter().map(|&i| std::mem::take(&mut simplex[i])).collect();
    let v: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    *simplex = s;
    *values = v;
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &SimplexOptions::default(),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-6);
        assert!((r.x[1] + 2.0).abs() < 1e-6);
        assert!(r.diameter <= 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let opts = SimplexOptions {
            max_iter: 5000,
            ..Default::default()
        };
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &opts,
        );
        assert!(r.fx < 1e-10, "fx = {}", r.fx);
    }

    #[test]
    fn non_finite_regions_are_avoided() {
        let r = minimize(
            |x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.5).powi(2) },
            &[2.0],
            &SimplexOptions::default(),
        );
        assert!((r.x[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| x.iter().map(|v| (v - 0.3).powi(4)).sum::<f64>();
        let a = minimize(f, &[1.0, 2.0, 3.0], &SimplexOptions::default());
        let b = minimize(f, &[1.0, 2.0, 3.0], &SimplexOptions::default());
        assert_eq!(a, b);
    }
}
