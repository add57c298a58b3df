//! Seeded random-graph construction for the four studied topologies.
//!
//! All generators draw from a PCG-64 stream (`rand_pcg::Pcg64`) seeded
//! from the spec, so a given `(model, n, seed)` triple produces a
//! bit-identical edge set on every platform. Independent instances should
//! use seeds derived via [`crate::seed::derive_seed`].

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Model variant and its parameters.
///
/// * `Er`: independent edges with probability `pi` in `(0, 1]`.
/// * `Ba`: preferential attachment; each new node attaches `m >= 1` edges
///   to a growing core that starts as a clique on `m + 1` nodes.
/// * `Pl`: configuration model on i.i.d. degrees from a discrete power law
///   with exponent `gamma > 2` and minimum degree 1.
/// * `Ln`: configuration model on degrees `round(exp(mu + xi * Z))`
///   clamped to at least 1, `Z` standard normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GraphModel {
    Er { pi: f64 },
    Ba { m: usize },
    Pl { gamma: f64 },
    Ln { mu: f64, xi: f64 },
}

/// A fully determined generation request: model, node count, RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphModelSpec {
    #[serde(flatten)]
    pub model: GraphModel,
    pub n: usize,
    pub seed: u64,
}

impl GraphModelSpec {
    fn validate(&self) -> Result<(), GraphError> {
        let fail = |msg: String| Err(GraphError::InvalidParameter(msg));
        if self.n < 2 {
            return fail(format!("node count must be >= 2, got {}", self.n));
        }
        match self.model {
            GraphModel::Er { pi } => {
                if !(pi.is_finite() && pi > 0.0 && pi <= 1.0) {
                    return fail(format!("edge probability pi must lie in (0, 1], got {pi}"));
                }
            }
            GraphModel::Ba { m } => {
                if m < 1 {
                    return fail("attachment parameter m must be >= 1".into());
                }
                if self.n < m + 1 {
                    return fail(format!(
                        "n = {} too small for the clique core on m + 1 = {} nodes",
                        self.n,
                        m + 1
                    ));
                }
            }
            GraphModel::Pl { gamma } => {
                if !(gamma.is_finite() && gamma > 2.0) {
                    return fail(format!("power-law exponent gamma must be > 2, got {gamma}"));
                }
            }
            GraphModel::Ln { mu, xi } => {
                if !mu.is_finite() {
                    return fail(format!("log-location mu must be finite, got {mu}"));
                }
                if !(xi.is_finite() && xi > 0.0) {
                    return fail(format!("log-scale xi must be > 0, got {xi}"));
                }
            }
        }
        Ok(())
    }
}

/// Generates a graph from the spec. Deterministic in `(model, n, seed)`.
pub fn generate(spec: &GraphModelSpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let mut rng = Pcg64::seed_from_u64(spec.seed);
    let edges = match spec.model {
        GraphModel::Er { pi } => erdos_renyi_edges(spec.n, pi, &mut rng),
        GraphModel::Ba { m } => barabasi_albert_edges(spec.n, m, &mut rng),
        GraphModel::Pl { gamma } => {
            let degrees = power_law_degrees(spec.n, gamma, &mut rng);
            configuration_model_edges(&degrees, &mut rng)
        }
        GraphModel::Ln { mu, xi } => {
            let degrees = log_normal_degrees(spec.n, mu, xi, &mut rng);
            configuration_model_edges(&degrees, &mut rng)
        }
    };
    Graph::from_edges(spec.n, edges, false)
}

fn erdos_renyi_edges(n: usize, pi: f64, rng: &mut Pcg64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < pi {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn barabasi_albert_edges(n: usize, m: usize, rng: &mut Pcg64) -> Vec<(usize, usize)> {
    let core = m + 1;
    let mut edges = Vec::new();
    // Attachment targets are drawn from this degree-weighted list: every
    // edge endpoint appears once, so picks are proportional to degree.
    let mut stubs: Vec<usize> = Vec::with_capacity(2 * m * n);
    for u in 0..core {
        for v in (u + 1)..core {
            edges.push((u, v));
            stubs.push(u);
            stubs.push(v);
        }
    }
    for new_node in core..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let pick = stubs[rng.random_range(0..stubs.len())];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        targets.sort_unstable();
        for &t in &targets {
            edges.push((t, new_node));
            stubs.push(t);
            stubs.push(new_node);
        }
    }
    edges
}

fn power_law_degrees(n: usize, gamma: f64, rng: &mut Pcg64) -> Vec<usize> {
    let cap = n - 1;
    let draw = |rng: &mut Pcg64| -> usize {
        // Continuous Pareto with exponent gamma and minimum 1, floored.
        let u: f64 = rng.random();
        let x = (1.0 - u).powf(-1.0 / (gamma - 1.0));
        (x.floor() as usize).clamp(1, cap)
    };
    let mut degrees: Vec<usize> = (0..n).map(|_| draw(rng)).collect();
    force_even_stub_sum(&mut degrees, |rng| draw(rng), rng);
    degrees
}

fn log_normal_degrees(n: usize, mu: f64, xi: f64, rng: &mut Pcg64) -> Vec<usize> {
    let cap = n - 1;
    let draw = |rng: &mut Pcg64| -> usize {
        let z = standard_normal(rng);
        let x = (mu + xi * z).exp().round();
        if x.is_finite() {
            (x as usize).clamp(1, cap)
        } else {
            cap
        }
    };
    let mut degrees: Vec<usize> = (0..n).map(|_| draw(rng)).collect();
    force_even_stub_sum(&mut degrees, |rng| draw(rng), rng);
    degrees
}

/// Stub pairing needs an even degree sum; resample the first node's degree
/// until parity works out.
fn force_even_stub_sum<F>(degrees: &mut [usize], mut draw: F, rng: &mut Pcg64)
where
    F: FnMut(&mut Pcg64) -> usize,
{
    let mut total: usize = degrees.iter().sum();
    while total % 2 == 1 {
        let fresh = draw(rng);
        total = total - degrees[0] + fresh;
        degrees[0] = fresh;
    }
}

/// Pairs shuffled stubs into edges; self-loops are skipped here and
/// multi-edges collapse in `Graph::from_edges`.
fn configuration_model_edges(degrees: &[usize], rng: &mut Pcg64) -> Vec<(usize, usize)> {
    let mut stubs: Vec<usize> = Vec::with_capacity(degrees.iter().sum());
    for (node, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node, d));
    }
    stubs.shuffle(rng);
    stubs
        .chunks_exact(2)
        .map(|pair| (pair[0], pair[1]))
        .filter(|&(u, v)| u != v)
        .collect()
}

/// Box-Muller transform; one variate per call.
fn standard_normal(rng: &mut Pcg64) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
