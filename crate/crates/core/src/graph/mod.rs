//! Immutable graphs: construction, edge-list ingestion and export, and
//! largest-connected-component extraction.
//!
//! Node ids are dense `0..n`. Self-loops and duplicate edges are collapsed
//! at construction, adjacency lists are kept sorted, and the edge set is
//! stored in canonical order, so identical inputs always produce identical
//! structures (and identical serialized files).

pub mod generate;

use std::collections::VecDeque;
use std::io::{self, BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("node id {id} out of range for graph of {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("edge list parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge list contains no edges")]
    EmptyInput,
    #[error("operation requires a nonempty graph")]
    EmptyGraph,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// An immutable graph over dense node ids `0..n`.
///
/// Undirected graphs store each edge once as `(min, max)`; directed graphs
/// keep the `(source, target)` orientation and adjacency lists hold
/// out-neighbours. Safe to share across threads for concurrent reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    directed: bool,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Self-loops and duplicate edges
    /// (in the undirected sense when `directed` is false) are dropped.
    pub fn from_edges<I>(n: usize, edges: I, directed: bool) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::InvalidParameter("node count must be >= 1".into()));
        }
        let mut canonical: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange { id: v, n });
            }
            if u == v {
                continue;
            }
            canonical.push(if directed || u < v { (u, v) } else { (v, u) });
        }
        canonical.sort_unstable();
        canonical.dedup();

        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canonical {
            adj[u].push(v);
            if !directed {
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: canonical, directed, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonically ordered edge set.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Sorted neighbour list (out-neighbours when directed).
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Connectivity in the undirected sense.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let sym = self.symmetric_view();
        let mut seen = vec![false; self.n];
        component_from(sym.as_ref(), 0, &mut seen).len() == self.n
    }

    /// Adjacency with directions ignored; borrows when already undirected.
    fn symmetric_view(&self) -> std::borrow::Cow<'_, [Vec<usize>]> {
        if !self.directed {
            return std::borrow::Cow::Borrowed(&self.adj);
        }
        let mut sym = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            sym[u].push(v);
            sym[v].push(u);
        }
        std::borrow::Cow::Owned(sym)
    }
}

/// Members of the connected component containing `start`, marking `seen`.
fn component_from(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut queue = VecDeque::from([start]);
    let mut members = vec![start];
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                members.push(v);
                queue.push_back(v);
            }
        }
    }
    members
}

/// Induced subgraph on the largest connected component (undirected sense),
/// with ids recompacted in increasing original-id order. Ties between
/// equal-sized components go to the one containing the smallest original
/// id. Returns the subgraph together with the map from new id to original
/// id.
pub fn largest_connected_component(g: &Graph) -> Result<(Graph, Vec<usize>), GraphError> {
    if g.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let sym = g.symmetric_view();
    let mut seen = vec![false; g.n()];
    let mut best: Vec<usize> = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        let members = component_from(sym.as_ref(), start, &mut seen);
        // Scanning starts at the smallest unvisited id, so the first
        // component reaching the maximum size contains the smallest id
        // among all maximum-size components.
        if members.len() > best.len() {
            best = members;
        }
    }
    best.sort_unstable();
    let mut new_id = vec![usize::MAX; g.n()];
    for (fresh, &orig) in best.iter().enumerate() {
        new_id[orig] = fresh;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|(u, v)| new_id[*u] != usize::MAX && new_id[*v] != usize::MAX)
        .map(|&(u, v)| (new_id[u], new_id[v]));
    let sub = Graph::from_edges(best.len(), edges, g.is_directed())?;
    Ok((sub, best))
}

/// Outcome of parsing an edge-list stream: the compacted graph, the map
/// from compact id back to the external id, and counts of dropped lines.
#[derive(Debug)]
pub struct EdgeListReport {
    pub graph: Graph,
    /// `external_ids[new_id]` is the id that appeared in the input.
    pub external_ids: Vec<u64>,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

/// Parses a whitespace-separated edge list into an undirected graph.
///
/// Lines starting with `%` or `#` are comments and blank lines are
/// ignored. Each remaining line must begin with two integer node ids;
/// trailing columns (weights, timestamps) are ignored for compatibility
/// with the common network-collection formats. External ids are remapped
/// to `0..n` in increasing order and the mapping is retained. Duplicate
/// edges and self-loops are dropped and counted.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<EdgeListReport, GraphError> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let mut self_loops = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let line_no = idx + 1;
        let parse = |tok: Option<&str>| -> Result<u64, GraphError> {
            let tok = tok.ok_or_else(|| GraphError::Parse {
                line: line_no,
                message: "expected two node ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("`{tok}` is not a valid node id"),
            })
        };
        let u = parse(tokens.next())?;
        let v = parse(tokens.next())?;
        if u == v {
            self_loops += 1;
            continue;
        }
        raw.push((u, v));
    }
    if raw.is_empty() {
        return Err(GraphError::EmptyInput);
    }

    let mut external_ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    external_ids.sort_unstable();
    external_ids.dedup();
    let compact = |id: u64| external_ids.binary_search(&id).expect("id was collected");

    let mut edges: Vec<(usize, usize)> = raw
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (compact(u), compact(v));
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    let duplicates = before - edges.len();

    let graph = Graph::from_edges(external_ids.len(), edges, false)?;
    Ok(EdgeListReport { graph, external_ids, duplicates_dropped: duplicates, self_loops_dropped: self_loops })
}

/// Writes the canonical edge list: one `u v` line per edge, sorted.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)], false).unwrap()
    }

    #[test]
    fn from_edges_canonicalizes() {
        let g = Graph::from_edges(4, [(2, 0), (0, 2), (1, 1), (3, 1)], false).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(g.neighbors(2), &[0]);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn from_edges_rejects_out_of_range() {
        assert!(matches!(
            Graph::from_edges(2, [(0, 5)], false),
            Err(GraphError::NodeOutOfRange { id: 5, n: 2 })
        ));
    }

    #[test]
    fn directed_edges_keep_orientation() {
        let g = Graph::from_edges(3, [(2, 0), (0, 1)], true).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (2, 0)]);
        assert_eq!(g.neighbors(2), &[0]);
        assert!(g.neighbors(0).contains(&1));
        assert!(!g.neighbors(1).contains(&0));
    }

    #[test]
    fn load_simple_stream() {
        let report = load_edge_list("0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(report.graph.n(), 3);
        assert_eq!(report.graph.edge_count(), 2);
        assert_eq!(report.duplicates_dropped, 0);
        assert_eq!(report.self_loops_dropped, 0);
    }

    #[test]
    fn load_drops_duplicates_and_loops() {
        let report = load_edge_list("% comment\n5 9\n9 5\n5 5\n".as_bytes()).unwrap();
        assert_eq!(report.graph.n(), 2);
        assert_eq!(report.graph.edge_count(), 1);
        assert_eq!(report.duplicates_dropped, 1);
        assert_eq!(report.self_loops_dropped, 1);
        assert_eq!(report.external_ids, vec![5, 9]);
    }

    #[test]
    fn load_reports_parse_errors_with_line_numbers() {
        let err = load_edge_list("a b\n".as_bytes()).unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
        let err = load_edge_list("0 1\n7\n".as_bytes()).unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_rejects_empty_input() {
        assert!(matches!(load_edge_list("% nothing\n".as_bytes()), Err(GraphError::EmptyInput)));
        assert!(matches!(load_edge_list("".as_bytes()), Err(GraphError::EmptyInput)));
    }

    #[test]
    fn load_ignores_trailing_columns() {
        let report = load_edge_list("1 2 1.5 86400\n2 3 0.5 86401\n".as_bytes()).unwrap();
        assert_eq!(report.graph.n(), 3);
        assert_eq!(report.graph.edge_count(), 2);
    }

    #[test]
    fn round_trip_is_identity_on_canonical_graphs() {
        let g = Graph::from_edges(5, [(0, 3), (1, 2), (2, 4), (0, 1)], false).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = load_edge_list(&buf[..]).unwrap();
        assert_eq!(back.graph.edges(), g.edges());
        assert_eq!(back.graph.n(), g.n());
    }

    #[test]
    fn lcc_identity_on_connected() {
        let g = path3();
        let (sub, ids) = largest_connected_component(&g).unwrap();
        assert_eq!(sub.edges(), g.edges());
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn lcc_picks_larger_component() {
        // sizes 3 and 2
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)], false).unwrap();
        let (sub, ids) = largest_connected_component(&g).unwrap();
        assert_eq!(sub.n(), 3);
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn lcc_tie_breaks_toward_smallest_id() {
        // two 2-node components; the one containing id 0 wins
        let g = Graph::from_edges(4, [(2, 3), (0, 1)], false).unwrap();
        let (sub, ids) = largest_connected_component(&g).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(ids, vec![0, 1]);
    }

    #[test]
    fn lcc_isolated_nodes_do_not_win() {
        let g = Graph::from_edges(4, [(1, 2)], false).unwrap();
        let (sub, ids) = largest_connected_component(&g).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(ids, vec![1, 2]);
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        let g = Graph::from_edges(3, [(0, 1)], false).unwrap();
        assert!(!g.is_connected());
    }
}
