//! Exact shortest-path-length histograms via breadth-first search.
//!
//! A per-source histogram counts nodes at each distance from the source;
//! the aggregate over a source set is the elementwise sum, i.e. ordered
//! reachable pairs per distance. Distance-0 self pairs are excluded unless
//! explicitly requested. Per-source searches are independent and run in
//! parallel; the sum is associative and commutative so the result does not
//! depend on scheduling.

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum PathsError {
    #[error("source {node} out of range for graph of {n} nodes")]
    SourceOutOfRange { node: usize, n: usize },
    #[error("sample count {count} out of range 1..={n}")]
    SampleOutOfRange { count: usize, n: usize },
    #[error("histogram has no nonzero counts")]
    EmptyHistogram,
    #[error("histogram CSV parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Counts of node pairs (or nodes, for a single source) per shortest-path
/// distance. `counts()[k]` is the count at distance `k`; index 0 holds
/// self pairs and is zero unless they were requested. The vector ends at
/// the observed diameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceHistogram {
    counts: Vec<u64>,
    sources: usize,
}

impl DistanceHistogram {
    /// Wraps raw per-distance counts (index = distance). Trailing zero
    /// bins are trimmed. `sources` records how many BFS roots were
    /// aggregated (0 when unknown, e.g. counts read from a file).
    pub fn from_counts(mut counts: Vec<u64>, sources: usize) -> DistanceHistogram {
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        if counts.is_empty() {
            counts.push(0);
        }
        DistanceHistogram { counts, sources }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count_at(&self, distance: usize) -> u64 {
        self.counts.get(distance).copied().unwrap_or(0)
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    /// Total ordered pairs at positive distance.
    pub fn reachable_pairs(&self) -> u64 {
        self.counts.iter().skip(1).sum()
    }

    /// Largest distance with a nonzero count (0 for an empty histogram).
    pub fn diameter(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &c)| c > 0)
            .map(|(k, _)| k)
            .unwrap_or(0)
    }

    /// Counts over `0..=diameter` as floats, the shape the fitting stack
    /// consumes (bin 0 keeps its observed count, normally zero).
    pub fn fit_counts(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }
}

/// Summary statistics of a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramStats {
    pub mean: f64,
    pub diameter: usize,
}

/// Mean distance and diameter. Errors on an all-zero histogram.
pub fn histogram_stats(h: &DistanceHistogram) -> Result<HistogramStats, PathsError> {
    let total: u64 = h.counts.iter().sum();
    if total == 0 {
        return Err(PathsError::EmptyHistogram);
    }
    let weighted: f64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| k as f64 * c as f64)
        .sum();
    Ok(HistogramStats { mean: weighted / total as f64, diameter: h.diameter() })
}

/// BFS distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<Option<u32>>, PathsError> {
    if source >= g.n() {
        return Err(PathsError::SourceOutOfRange { node: source, n: g.n() });
    }
    let mut dist: Vec<Option<u32>> = vec![None; g.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have distances");
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

fn bfs_level_counts(g: &Graph, source: usize, include_self: bool) -> Vec<u64> {
    let mut dist: Vec<u32> = vec![u32::MAX; g.n()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut counts: Vec<u64> = vec![if include_self { 1 } else { 0 }];
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = next;
                if counts.len() <= next as usize {
                    counts.push(0);
                }
                counts[next as usize] += 1;
                queue.push_back(v);
            }
        }
    }
    counts
}

/// Histogram of distances from a single source (self distance excluded).
pub fn bfs_histogram_from(g: &Graph, source: usize) -> Result<DistanceHistogram, PathsError> {
    bfs_histogram_from_with(g, source, false)
}

/// As [`bfs_histogram_from`], optionally counting the source itself at
/// distance 0 (useful when comparing against outbreak traces, where the
/// source is infected at step 0).
pub fn bfs_histogram_from_with(
    g: &Graph,
    source: usize,
    include_self: bool,
) -> Result<DistanceHistogram, PathsError> {
    if source >= g.n() {
        return Err(PathsError::SourceOutOfRange { node: source, n: g.n() });
    }
    Ok(DistanceHistogram::from_counts(bfs_level_counts(g, source, include_self), 1))
}

/// Which BFS roots to aggregate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceSelection {
    /// Every node (ordered pairs counted once each).
    All,
    /// `count` distinct nodes drawn uniformly without replacement.
    Sample { count: usize, seed: u64 },
}

/// Elementwise sum of per-source histograms over the chosen source set.
pub fn aggregate_histogram(
    g: &Graph,
    selection: &SourceSelection,
) -> Result<DistanceHistogram, PathsError> {
    let sources = match *selection {
        SourceSelection::All => (0..g.n()).collect::<Vec<_>>(),
        SourceSelection::Sample { count, seed } => {
            if count == 0 || count > g.n() {
                return Err(PathsError::SampleOutOfRange { count, n: g.n() });
            }
            sample_without_replacement(g.n(), count, seed)
        }
    };
    let counts = sources
        .par_iter()
        .map(|&s| bfs_level_counts(g, s, false))
        .reduce(Vec::new, add_counts);
    Ok(DistanceHistogram::from_counts(counts, sources.len()))
}

fn add_counts(mut acc: Vec<u64>, other: Vec<u64>) -> Vec<u64> {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, b) in acc.iter_mut().zip(other.iter()) {
        *a += b;
    }
    acc
}

/// Partial Fisher-Yates draw of `count` distinct ids from `0..n`.
fn sample_without_replacement(n: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.random_range(i..n);
        ids.swap(i, j);
    }
    ids.truncate(count);
    ids
}

/// Writes `distance,count` rows sorted by distance. Distance 0 appears
/// only when it holds a nonzero count; interior zero bins are written so
/// the support is explicit.
pub fn write_histogram_csv<W: Write>(h: &DistanceHistogram, mut w: W) -> io::Result<()> {
    writeln!(w, "distance,count")?;
    for (k, &c) in h.counts().iter().enumerate() {
        if k == 0 && c == 0 {
            continue;
        }
        writeln!(w, "{k},{c}")?;
    }
    Ok(())
}

/// Reads a `distance,count` CSV back into per-distance counts (index =
/// distance; gaps filled with zeros).
pub fn read_histogram_csv<R: BufRead>(reader: R) -> Result<Vec<u64>, PathsError> {
    let mut counts: Vec<u64> = Vec::new();
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        if !saw_header {
            if trimmed != "distance,count" {
                return Err(PathsError::Csv {
                    line: line_no,
                    message: format!("expected header `distance,count`, got `{trimmed}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = trimmed.split(',');
        let bad = |message: String| PathsError::Csv { line: line_no, message };
        let k: usize = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("invalid distance".into()))?;
        let c: u64 = fields
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("invalid count".into()))?;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += c;
    }
    if !saw_header {
        return Err(PathsError::Csv { line: 0, message: "empty file".into() });
    }
    Ok(counts)
}
