//! Derivative-free Nelder-Mead simplex minimizer.
//!
//! Plain implementation with the standard reflection/expansion/contraction
//! coefficients (1, 2, 1/2) and shrink factor 1/2. Convergence demands both
//! a relative spread of function values below `rel_tol` and a simplex
//! diameter (max-norm) below `diam_tol`, so callers get parameter accuracy
//! rather than just a flat objective. Fully deterministic: ties never move
//! a vertex, which forces contraction and guarantees the diameter shrinks.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    pub rel_tol: f64,
    pub diam_tol: f64,
    /// Offset added to each coordinate in turn to build the start simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_iters: 10_000, rel_tol: 1e-10, diam_tol: 1e-8, initial_step: 0.25 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

struct Vertex {
    x: Vec<f64>,
    fx: f64,
}

/// Minimizes `f` starting from `x0`. Non-finite objective values are
/// treated as a very large finite penalty so the search backs away from
/// invalid regions instead of poisoning comparisons.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    assert!(dim >= 1, "need at least one parameter");
    let mut eval = move |x: &[f64]| -> f64 {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            1e300
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    simplex.push(Vertex { x: x0.to_vec(), fx: eval(x0) });
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = eval(&x);
        simplex.push(Vertex { x, fx });
    }
    sort_simplex(&mut simplex);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        let best = simplex[0].fx;
        let worst = simplex[dim].fx;
        let spread_ok = (worst - best).abs() <= opts.rel_tol * (1.0 + best.abs());
        let diam_ok = diameter(&simplex) <= opts.diam_tol;
        if spread_ok && diam_ok {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, &xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi;
            }
        }
        for c in &mut centroid {
            *c /= dim as f64;
        }

        let reflect = combine(&centroid, &simplex[dim].x, -1.0);
        let f_reflect = eval(&reflect);

        if f_reflect < simplex[0].fx {
            let expand = combine(&centroid, &simplex[dim].x, -2.0);
            let f_expand = eval(&expand);
            if f_expand < f_reflect {
                replace_worst(&mut simplex, expand, f_expand);
            } else {
                replace_worst(&mut simplex, reflect, f_reflect);
            }
        } else if f_reflect < simplex[dim - 1].fx {
            replace_worst(&mut simplex, reflect, f_reflect);
        } else if f_reflect < simplex[dim].fx {
            // Outside contraction.
            let outside = combine(&centroid, &simplex[dim].x, -0.5);
            let f_outside = eval(&outside);
            if f_outside <= f_reflect {
                replace_worst(&mut simplex, outside, f_outside);
            } else {
                shrink(&mut simplex, &mut eval);
            }
        } else {
            // Inside contraction.
            let inside = combine(&centroid, &simplex[dim].x, 0.5);
            let f_inside = eval(&inside);
            if f_inside < simplex[dim].fx {
                replace_worst(&mut simplex, inside, f_inside);
            } else {
                shrink(&mut simplex, &mut eval);
            }
        }
    }

    SimplexOutcome {
        x: simplex[0].x.clone(),
        fx: simplex[0].fx,
        iterations,
        converged,
    }
}

/// `centroid + coeff * (worst - centroid)`; negative `coeff` reflects.
fn combine(centroid: &[f64], worst: &[f64], coeff: f64) -> Vec<f64> {
    centroid
        .iter()
        .zip(worst)
        .map(|(&c, &w)| c + coeff * (w - c))
        .collect()
}

fn replace_worst(simplex: &mut [Vertex], x: Vec<f64>, fx: f64) {
    let last = simplex.len() - 1;
    simplex[last] = Vertex { x, fx };
    sort_simplex(simplex);
}

fn shrink<F: FnMut(&[f64]) -> f64>(simplex: &mut [Vertex], eval: &mut F) {
    let best = simplex[0].x.clone();
    for v in simplex.iter_mut().skip(1) {
        for (xi, &bi) in v.x.iter_mut().zip(&best) {
            *xi = bi + 0.5 * (*xi - bi);
        }
        v.fx = eval(&v.x);
    }
    sort_simplex(simplex);
}

fn sort_simplex(simplex: &mut [Vertex]) {
    // Stable sort keeps insertion order on ties, so runs are reproducible.
    simplex.sort_by(|a, b| a.fx.partial_cmp(&b.fx).unwrap_or(std::cmp::Ordering::Equal));
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].x;
    simplex[1..]
        .iter()
        .map(|v| {
            v.x.iter()
                .zip(best)
                .map(|(&a, &b)| (a - b).abs())
                .fold(0.0f64, f64::max)
        })
        .fold(0.0f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic_bowl() {
        let out = minimize(
            |x| (x[0] - 1.5).powi(2) + 2.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &SimplexOptions::default(),
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.5).abs() < 1e-7, "{:?}", out.x);
        assert!((out.x[1] + 0.5).abs() < 1e-7, "{:?}", out.x);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let rosenbrock =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(rosenbrock, &[-1.2, 1.0], &SimplexOptions::default());
        assert!(out.converged, "iterations {}", out.iterations);
        assert!((out.x[0] - 1.0).abs() < 1e-5, "{:?}", out.x);
        assert!((out.x[1] - 1.0).abs() < 1e-5, "{:?}", out.x);
    }

    #[test]
    fn single_dimension_works() {
        let out = minimize(|x| (x[0] - 3.0).powi(2), &[0.0], &SimplexOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-7);
    }

    #[test]
    fn survives_non_finite_regions() {
        let out = minimize(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 2.0).powi(2)
                }
            },
            &[1.0],
            &SimplexOptions::default(),
        );
        assert!((out.x[0] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn iteration_budget_is_respected() {
        let opts = SimplexOptions { max_iters: 5, ..SimplexOptions::default() };
        let out = minimize(|x| x[0].powi(2), &[100.0], &opts);
        assert!(!out.converged);
        assert_eq!(out.iterations, 5);
    }
}
