//! Independent reference oracles used by the test suites.
//!
//! Everything in this crate is deliberately written from first principles
//! (quadrature, dense all-pairs shortest paths, exhaustive outcome-tree
//! enumeration, Stirling-series log-gamma) so that it shares no code path
//! with the library it is used to check. Keep it dependency-free.

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
///
/// `tol` is the absolute error target for the whole interval; recursion
/// splits the budget between halves. Panics are avoided by capping the
/// recursion depth, which bounds the cost on nasty integrands.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        // Never demand more than f64 round-off allows, or the recursion
        // can subdivide forever on noise.
        let child_tol = (0.5 * tol).max(5e-17);
        simpson_rec(f, a, m, fa, flm, fm, left, child_tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, child_tol, depth - 1)
    }
}

/// Integrates a density `f` over `[lo, hi]` (0 < lo < hi) by substituting
/// `t = exp(u)`, which removes both the power-law behaviour at the origin
/// and the stretched-exponential tail. The log-domain interval is split
/// into fixed panels before adaptive refinement so a narrow peak cannot
/// slip between the initial sample points.
pub fn integrate_positive_density<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> f64 {
    let g = |u: f64| {
        let t = u.exp();
        f(t) * t
    };
    let (a, b) = (lo.ln(), hi.ln());
    const PANELS: usize = 64;
    let width = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let pa = a + i as f64 * width;
            adaptive_simpson(&g, pa, pa + width, tol / PANELS as f64)
        })
        .sum()
}

/// All-pairs shortest path lengths by the Floyd–Warshall recurrence on a
/// dense matrix. `usize::MAX` marks unreachable pairs. Undirected edges.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    const INF: usize = usize::MAX;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in edges {
        if u != v {
            d[u][v] = 1;
            d[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] == INF {
                    continue;
                }
                let through = d[i][k] + d[k][j];
                if through < d[i][j] {
                    d[i][j] = through;
                }
            }
        }
    }
    d
}

/// Exact final-size distribution of a discrete-time SIR cascade with
/// recovery probability 1, obtained by exhaustive enumeration of the
/// outcome tree. Nodes are `0..n`, `adj` lists neighbours, `infect` is the
/// per-contact transmission probability, `source` starts infected.
///
/// Returns `(mean, variance)` of the final outbreak size. Each infected
/// node is infectious for exactly one step, so the state is the pair
/// (susceptible set, frontier set) and both fit in a `u32` bitmask.
pub fn sir_final_size_exact(
    n: usize,
    adj: &[Vec<usize>],
    source: usize,
    infect: f64,
) -> (f64, f64) {
    assert!(n <= 20, "exhaustive enumeration is exponential in n");
    let full: u32 = (1u32 << n) - 1;
    let susceptible = full & !(1u32 << source);
    let frontier = 1u32 << source;
    let mut sizes: Vec<(f64, f64)> = Vec::new(); // (probability, final size)
    walk_outcomes(adj, infect, susceptible, frontier, 1, 1.0, &mut sizes);
    let mean: f64 = sizes.iter().map(|&(p, s)| p * s).sum();
    let second: f64 = sizes.iter().map(|&(p, s)| p * s * s).sum();
    (mean, second - mean * mean)
}

fn walk_outcomes(
    adj: &[Vec<usize>],
    infect: f64,
    susceptible: u32,
    frontier: u32,
    infected_so_far: u64,
    prob: f64,
    out: &mut Vec<(f64, f64)>,
) {
    if frontier == 0 || susceptible == 0 {
        out.push((prob, infected_so_far as f64));
        return;
    }
    // Per-susceptible probability of being infected this step given the
    // frontier: 1 - (1 - i)^c with c infectious neighbours.
    let sus_nodes: Vec<usize> = (0..adj.len()).filter(|&v| susceptible & (1 << v) != 0).collect();
    let p_hit: Vec<f64> = sus_nodes
        .iter()
        .map(|&v| {
            let c = adj[v].iter().filter(|&&u| frontier & (1 << u) != 0).count();
            1.0 - (1.0 - infect).powi(c as i32)
        })
        .collect();
    let m = sus_nodes.len();
    for subset in 0u32..(1u32 << m) {
        let mut p_branch = prob;
        let mut next_frontier = 0u32;
        let mut newly = 0u64;
        for (idx, &v) in sus_nodes.iter().enumerate() {
            if subset & (1 << idx) != 0 {
                p_branch *= p_hit[idx];
                next_frontier |= 1 << v;
                newly += 1;
            } else {
                p_branch *= 1.0 - p_hit[idx];
            }
        }
        if p_branch == 0.0 {
            continue;
        }
        walk_outcomes(
            adj,
            infect,
            susceptible & !next_frontier,
            next_frontier,
            infected_so_far + newly,
            p_branch,
            out,
        );
    }
}

/// Log-gamma by the Stirling series with argument shifting, an independent
/// route to compare against Lanczos-based implementations. Accurate to well
/// below 1e-13 for x > 0.
pub fn ln_gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
    // Shift into the asymptotic regime, then undo via Gamma(x+1) = x Gamma(x).
    let mut shift = 0.0;
    let mut y = x;
    while y < 25.0 {
        shift += y.ln();
        y += 1.0;
    }
    // Stirling: ln G(y) = (y-1/2) ln y - y + ln(2 pi)/2 + sum B_2n / (2n(2n-1) y^(2n-1))
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let mut series = 0.0;
    let mut y_pow = y;
    for c in COEFFS {
        series += c / y_pow;
        y_pow *= y * y;
    }
    (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_near_exact() {
        let got = adaptive_simpson(&|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12);
        // integral = 4 - 4 + 2
        assert!((got - 2.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_exp_tail() {
        let got = integrate_positive_density(&|t| (-t).exp(), 1e-12, 60.0, 1e-11);
        assert!((got - 1.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn floyd_warshall_path_graph() {
        let d = floyd_warshall(3, &[(0, 1), (1, 2)]);
        assert_eq!(d[0][2], 2);
        assert_eq!(d[2][0], 2);
        assert_eq!(d[1][1], 0);
    }

    #[test]
    fn sir_exact_certain_spread_on_k3() {
        // i = 1 on a triangle: both other nodes are infected in one step.
        let adj = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        let (mean, var) = sir_final_size_exact(3, &adj, 0, 1.0);
        assert!((mean - 3.0).abs() < 1e-12);
        assert!(var.abs() < 1e-12);
    }

    #[test]
    fn sir_exact_no_spread() {
        let adj = vec![vec![1], vec![0]];
        let (mean, var) = sir_final_size_exact(2, &adj, 0, 0.0);
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(var.abs() < 1e-12);
    }

    #[test]
    fn stirling_matches_known_values() {
        assert!(ln_gamma_stirling(1.0).abs() < 1e-13);
        assert!(ln_gamma_stirling(2.0).abs() < 1e-13);
        // Gamma(5) = 24
        assert!((ln_gamma_stirling(5.0) - 24f64.ln()).abs() < 1e-12);
        // Gamma(0.5) = sqrt(pi)
        let half = 0.5 * std::f64::consts::PI.ln();
        assert!((ln_gamma_stirling(0.5) - half).abs() < 1e-12);
    }
}
