//! Discrete-time SIR cascades, outbreak traces, and who-infected-whom
//! causal graphs.
//!
//! Step semantics: every node infectious at the start of a step attempts
//! to infect each susceptible neighbour independently with probability
//! `infect`, where "susceptible" is frozen at the step start; the same
//! infectious nodes then each recover with probability `recover`. Nodes
//! infected this step become infectious next step; when several infectors
//! succeed on one node in the same step, the causal graph records an edge
//! from each of them. With `infect = 1` and `recover = 1` the trace
//! reproduces BFS levels from the source exactly.
//!
//! Simulations consume a private PCG-64 stream: infection draws run over
//! infectious nodes in ascending id and neighbours in adjacency order,
//! recovery draws follow in ascending id, so a seed fully determines the
//! outcome. Ensembles derive per-replicate seeds from a master seed and
//! may run replicates in parallel.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::seed::derive_seed;

#[derive(Debug, Error)]
pub enum EpidemicsError {
    #[error("infection probability must lie in [0, 1], got {0}")]
    InvalidInfect(f64),
    #[error("recovery probability must lie in (0, 1], got {0}")]
    InvalidRecover(f64),
    #[error("source {node} out of range for graph of {n} nodes")]
    SourceOutOfRange { node: usize, n: usize },
    #[error("node id {id} out of range for causal graph of {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("causal graph contains a cycle; infection order cannot cycle")]
    CyclicCausalGraph,
    #[error("ensemble needs at least one replicate")]
    EmptyEnsemble,
    #[error("average of an empty trace list is undefined")]
    EmptyTraceList,
    #[error("trace CSV parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Per-step infection and recovery probabilities plus the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirParams {
    pub infect: f64,
    pub recover: f64,
    pub seed: u64,
}

impl SirParams {
    pub fn new(infect: f64, recover: f64, seed: u64) -> Result<Self, EpidemicsError> {
        if !(infect.is_finite() && (0.0..=1.0).contains(&infect)) {
            return Err(EpidemicsError::InvalidInfect(infect));
        }
        if !(recover.is_finite() && recover > 0.0 && recover <= 1.0) {
            return Err(EpidemicsError::InvalidRecover(recover));
        }
        Ok(SirParams { infect, recover, seed })
    }
}

/// Newly infected counts per time step; `newly_infected[0] = 1` is the
/// source at onset. Trailing zero steps after the last infection are
/// trimmed, so an epidemic that never spreads is just `[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutbreakTrace {
    pub newly_infected: Vec<u64>,
    pub source: usize,
}

impl OutbreakTrace {
    pub fn final_size(&self) -> u64 {
        self.newly_infected.iter().sum()
    }

    /// Counts as floats, the shape the fitting stack consumes.
    pub fn fit_counts(&self) -> Vec<f64> {
        self.newly_infected.iter().map(|&c| c as f64).collect()
    }
}

/// Directed acyclic graph of successful transmissions (infector ->
/// infectee) of one cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
}

impl CausalGraph {
    /// Builds a causal graph from directed edges. Ids must be in range;
    /// acyclicity is validated by [`nilpotency_index`], mirroring where
    /// the structure matters.
    pub fn new(
        n: usize,
        mut edges: Vec<(usize, usize)>,
        source: usize,
    ) -> Result<Self, EpidemicsError> {
        if source >= n {
            return Err(EpidemicsError::SourceOutOfRange { node: source, n });
        }
        for &(u, v) in &edges {
            let id = if u >= n { u } else { v };
            if id >= n {
                return Err(EpidemicsError::NodeOutOfRange { id, n });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(CausalGraph { n, edges, source })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// The same edges as a directed [`Graph`] for export.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied(), true)
            .expect("validated causal edges")
    }

    fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        adj
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Susceptible,
    Infectious,
    Removed,
}

/// Runs one cascade from `source`. Deterministic in `params.seed`.
pub fn simulate_sir(
    g: &Graph,
    source: usize,
    params: &SirParams,
) -> Result<(OutbreakTrace, CausalGraph), EpidemicsError> {
    SirParams::new(params.infect, params.recover, params.seed)?;
    if source >= g.n() {
        return Err(EpidemicsError::SourceOutOfRange { node: source, n: g.n() });
    }
    let mut rng = Pcg64::seed_from_u64(params.seed);
    let mut state = vec![State::Susceptible; g.n()];
    state[source] = State::Infectious;
    let mut infectious = vec![source];
    let mut newly_infected: Vec<u64> = vec![1];
    let mut causal_edges: Vec<(usize, usize)> = Vec::new();

    while !infectious.is_empty() {
        // Infection attempts against the susceptible set frozen at step
        // start; states flip only after the phase so simultaneous
        // infectors all land their causal edges.
        let mut hits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &u in &infectious {
            for &v in g.neighbors(u) {
                if state[v] == State::Susceptible && rng.random::<f64>() < params.infect {
                    hits.entry(v).or_default().push(u);
                }
            }
        }
        let mut next: Vec<usize> = Vec::with_capacity(infectious.len() + hits.len());
        for &u in &infectious {
            if rng.random::<f64>() < params.recover {
                state[u] = State::Removed;
            } else {
                next.push(u);
            }
        }
        newly_infected.push(hits.len() as u64);
        for (&v, infectors) in &hits {
            state[v] = State::Infectious;
            next.push(v);
            for &u in infectors {
                causal_edges.push((u, v));
            }
        }
        next.sort_unstable();
        infectious = next;
    }
    // Steps after the last infection only drain recoveries; drop them so
    // a cascade that never spreads is the bare onset [1].
    while newly_infected.len() > 1 && *newly_infected.last().unwrap() == 0 {
        newly_infected.pop();
    }

    let trace = OutbreakTrace { newly_infected, source };
    let causal = CausalGraph::new(g.n(), causal_edges, source)?;
    Ok((trace, causal))
}

/// Runs `replicates` independent cascades with seeds derived from
/// `master_seed`; each replicate picks a uniform random source unless one
/// is fixed. Replicates run in parallel and are returned in replicate
/// order.
pub fn simulate_ensemble(
    g: &Graph,
    infect: f64,
    recover: f64,
    replicates: usize,
    master_seed: u64,
    source: Option<usize>,
) -> Result<Vec<(OutbreakTrace, CausalGraph)>, EpidemicsError> {
    if replicates == 0 {
        return Err(EpidemicsError::EmptyEnsemble);
    }
    (0..replicates)
        .into_par_iter()
        .map(|k| {
            let source = match source {
                Some(s) => s,
                None => {
                    let mut source_rng =
                        Pcg64::seed_from_u64(derive_seed(master_seed, 2 * k as u64));
                    source_rng.random_range(0..g.n())
                }
            };
            let params = SirParams {
                infect,
                recover,
                seed: derive_seed(master_seed, 2 * k as u64 + 1),
            };
            simulate_sir(g, source, &params)
        })
        .collect()
}

/// Number of source-to-anywhere walks of each length `k = 1..=k_max` in
/// the causal DAG, computed by frontier propagation (no matrix powers).
/// Counts are exact integers while below 2^53 and saturate smoothly in
/// `f64` beyond; a zero is always structural.
pub fn causal_path_counts(c: &CausalGraph, k_max: usize) -> Vec<f64> {
    let adj = c.out_adjacency();
    let mut reach = vec![0.0f64; c.n()];
    reach[c.source()] = 1.0;
    let mut counts = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let mut next = vec![0.0f64; c.n()];
        let mut any = false;
        for (u, &r) in reach.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            for &v in &adj[u] {
                next[v] += r;
                any = true;
            }
        }
        counts.push(if any { next.iter().sum() } else { 0.0 });
        reach = next;
        if !any {
            // A^k stays zero from here on; fill the remaining entries.
            counts.resize(k_max, 0.0);
            break;
        }
    }
    counts
}

/// Smallest `K` such that all walk counts vanish beyond `K`; equals the
/// longest path length in the DAG. Errors if the graph has a cycle (a
/// causal graph cannot).
pub fn nilpotency_index(c: &CausalGraph) -> Result<usize, EpidemicsError> {
    let adj = c.out_adjacency();
    let mut in_degree = vec![0usize; c.n()];
    for &(_, v) in c.edges() {
        in_degree[v] += 1;
    }
    // Kahn's algorithm; the longest path ending at each node falls out of
    // the same pass.
    let mut queue: Vec<usize> =
        (0..c.n()).filter(|&u| in_degree[u] == 0).collect();
    let mut longest = vec![0usize; c.n()];
    let mut processed = 0usize;
    let mut best = 0usize;
    while let Some(u) = queue.pop() {
        processed += 1;
        for &v in &adj[u] {
            longest[v] = longest[v].max(longest[u] + 1);
            best = best.max(longest[v]);
            in_degree[v] -= 1;
            if in_degree[v] == 0 {
                queue.push(v);
            }
        }
    }
    if processed != c.n() {
        return Err(EpidemicsError::CyclicCausalGraph);
    }
    Ok(best)
}

/// Elementwise mean of traces, shorter traces zero-padded to the longest.
pub fn average_outbreak(traces: &[OutbreakTrace]) -> Result<Vec<f64>, EpidemicsError> {
    if traces.is_empty() {
        return Err(EpidemicsError::EmptyTraceList);
    }
    let longest = traces.iter().map(|t| t.newly_infected.len()).max().unwrap();
    let mut avg = vec![0.0f64; longest];
    for t in traces {
        for (slot, &c) in avg.iter_mut().zip(t.newly_infected.iter()) {
            *slot += c as f64;
        }
    }
    for slot in &mut avg {
        *slot /= traces.len() as f64;
    }
    Ok(avg)
}

/// Writes one trace as `t,newly_infected` rows.
pub fn write_trace_csv<W: Write>(trace: &OutbreakTrace, mut w: W) -> io::Result<()> {
    writeln!(w, "t,newly_infected")?;
    for (t, &c) in trace.newly_infected.iter().enumerate() {
        writeln!(w, "{t},{c}")?;
    }
    Ok(())
}

/// Writes an ensemble: per-replicate blocks keyed by replicate index, then
/// the elementwise average block keyed `avg`.
pub fn write_ensemble_csv<W: Write>(
    traces: &[OutbreakTrace],
    average: &[f64],
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "replicate,t,newly_infected")?;
    for (r, trace) in traces.iter().enumerate() {
        for (t, &c) in trace.newly_infected.iter().enumerate() {
            writeln!(w, "{r},{t},{c}")?;
        }
    }
    for (t, &c) in average.iter().enumerate() {
        writeln!(w, "avg,{t},{c}")?;
    }
    Ok(())
}

/// Reads per-step counts back from either trace CSV layout. Ensemble
/// files yield their average block.
pub fn read_trace_counts<R: BufRead>(reader: R) -> Result<Vec<f64>, EpidemicsError> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((idx, line)) => {
                let line = line?;
                let trimmed = line.trim().to_string();
                if trimmed.is_empty() {
                    continue;
                }
                break (idx + 1, trimmed);
            }
            None => {
                return Err(EpidemicsError::Csv { line: 0, message: "empty file".into() })
            }
        }
    };
    let ensemble = match header.1.as_str() {
        "t,newly_infected" => false,
        "replicate,t,newly_infected" => true,
        other => {
            return Err(EpidemicsError::Csv {
                line: header.0,
                message: format!("unrecognized trace header `{other}`"),
            })
        }
    };
    let mut counts: Vec<f64> = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let bad = |message: String| EpidemicsError::Csv { line: line_no, message };
        let fields: Vec<&str> = trimmed.split(',').collect();
        let (t_field, c_field) = if ensemble {
            if fields.len() != 3 {
                return Err(bad("expected replicate,t,newly_infected".into()));
            }
            if fields[0] != "avg" {
                continue;
            }
            (fields[1], fields[2])
        } else {
            if fields.len() != 2 {
                return Err(bad("expected t,newly_infected".into()));
            }
            (fields[0], fields[1])
        };
        let t: usize = t_field
            .trim()
            .parse()
            .map_err(|_| bad(format!("invalid time step `{t_field}`")))?;
        let c: f64 = c_field
            .trim()
            .parse()
            .map_err(|_| bad(format!("invalid count `{c_field}`")))?;
        if counts.len() <= t {
            counts.resize(t + 1, 0.0);
        }
        counts[t] = c;
    }
    if ensemble && counts.is_empty() {
        return Err(EpidemicsError::Csv {
            line: 0,
            message: "ensemble file has no `avg` block".into(),
        });
    }
    Ok(counts)
}
