//! Directed symmetric graphs.
//!
//! Every undirected link `{i, j}` is stored as the two directed edges
//! `(i, j)` and `(j, i)`, so `m` always counts directed edges and is even.
//! Edges are kept in lexicographic order for reproducible iteration.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GbbError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Star,
    Complete,
    Circle,
    Matching,
    Custom,
}

impl GraphKind {
    /// The four structured families.
    pub const FAMILIES: [GraphKind; 4] = [
        GraphKind::Star,
        GraphKind::Complete,
        GraphKind::Circle,
        GraphKind::Matching,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GraphKind::Star => "star",
            GraphKind::Complete => "complete",
            GraphKind::Circle => "circle",
            GraphKind::Matching => "matching",
            GraphKind::Custom => "custom",
        }
    }

    /// Number of nodes a graph of this kind needs to carry exactly `m`
    /// directed edges, or `None` when `m` is not realizable.
    pub fn nodes_for_edges(&self, m: usize) -> Option<usize> {
        if m == 0 || !m.is_multiple_of(2) {
            return None;
        }
        match self {
            GraphKind::Star => Some(m / 2 + 1),
            GraphKind::Circle => (m / 2 >= 3).then_some(m / 2),
            GraphKind::Matching => Some(m),
            GraphKind::Complete => {
                // n(n - 1) = m
                let n = ((1.0 + ((4 * m + 1) as f64).sqrt()) / 2.0).round() as usize;
                (n >= 2 && n * (n - 1) == m).then_some(n)
            }
            GraphKind::Custom => None,
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = GbbError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "star" => Ok(GraphKind::Star),
            "complete" => Ok(GraphKind::Complete),
            "circle" => Ok(GraphKind::Circle),
            "matching" => Ok(GraphKind::Matching),
            "custom" | "file" => Ok(GraphKind::Custom),
            other => Err(GbbError::Config(format!("unknown graph kind '{other}'"))),
        }
    }
}

/// An immutable directed symmetric graph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    kind: GraphKind,
}

impl Graph {
    /// Validates and builds a graph from directed edges. Asymmetric input is
    /// rejected, never completed.
    pub fn from_edges(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::build(n_nodes, edges, GraphKind::Custom)
    }

    fn build(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        kind: GraphKind,
    ) -> Result<Self> {
        if n_nodes == 0 {
            return Err(GbbError::InvalidSize("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n_nodes {
                return Err(GbbError::IndexOutOfRange { index: i, len: n_nodes });
            }
            if j >= n_nodes {
                return Err(GbbError::IndexOutOfRange { index: j, len: n_nodes });
            }
            if i == j {
                return Err(GbbError::InvalidGraph(format!("self-loop on node {i}")));
            }
            if !set.insert((i, j)) {
                return Err(GbbError::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
        }
        if let Some(&(i, j)) = set.iter().find(|&&(i, j)| !set.contains(&(j, i))) {
            return Err(GbbError::InvalidGraph(format!(
                "edge ({i}, {j}) has no reverse edge ({j}, {i})"
            )));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(i, j) in &edges {
            neighbors[i].push(j);
        }
        Ok(Graph { n_nodes, edges, neighbors, kind })
    }

    fn undirected(n_nodes: usize, links: impl IntoIterator<Item = (usize, usize)>, kind: GraphKind) -> Result<Self> {
        let edges = links.into_iter().flat_map(|(i, j)| [(i, j), (j, i)]);
        Self::build(n_nodes, edges, kind)
    }

    /// Star with node 0 as the center.
    pub fn star(n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 {
            return Err(GbbError::InvalidSize(format!("star needs n >= 2, got {n_nodes}")));
        }
        Self::undirected(n_nodes, (1..n_nodes).map(|j| (0, j)), GraphKind::Star)
    }

    pub fn complete(n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 {
            return Err(GbbError::InvalidSize(format!("complete graph needs n >= 2, got {n_nodes}")));
        }
        let links = (0..n_nodes).flat_map(|i| (i + 1..n_nodes).map(move |j| (i, j)));
        Self::undirected(n_nodes, links, GraphKind::Complete)
    }

    pub fn circle(n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(GbbError::InvalidSize(format!("circle needs n >= 3, got {n_nodes}")));
        }
        Self::undirected(n_nodes, (0..n_nodes).map(|i| (i, (i + 1) % n_nodes)), GraphKind::Circle)
    }

    /// Perfect matching pairing node `2k` with `2k + 1`.
    pub fn matching(n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 || !n_nodes.is_multiple_of(2) {
            return Err(GbbError::InvalidSize(format!(
                "matching needs an even n >= 2, got {n_nodes}"
            )));
        }
        Self::undirected(n_nodes, (0..n_nodes / 2).map(|k| (2 * k, 2 * k + 1)), GraphKind::Matching)
    }

    pub fn of_kind(kind: GraphKind, n_nodes: usize) -> Result<Self> {
        match kind {
            GraphKind::Star => Self::star(n_nodes),
            GraphKind::Complete => Self::complete(n_nodes),
            GraphKind::Circle => Self::circle(n_nodes),
            GraphKind::Matching => Self::matching(n_nodes),
            GraphKind::Custom => Err(GbbError::Config(
                "custom graphs must be loaded from an edge list".into(),
            )),
        }
    }

    /// Graph of the given family with exactly `m` directed edges.
    pub fn with_edge_count(kind: GraphKind, m: usize) -> Result<Self> {
        let n = kind.nodes_for_edges(m).ok_or_else(|| {
            GbbError::Config(format!("m = {m} is not realizable by a {kind} graph"))
        })?;
        Self::of_kind(kind, n)
    }

    /// Erdős–Rényi graph: each undirected link present with probability `p`.
    pub fn erdos_renyi<R: Rng + ?Sized>(n_nodes: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GbbError::Domain(format!("edge probability {p} not in [0, 1]")));
        }
        let mut links = Vec::new();
        for i in 0..n_nodes {
            for j in i + 1..n_nodes {
                if rng.random::<f64>() < p {
                    links.push((i, j));
                }
            }
        }
        Self::undirected(n_nodes, links, GraphKind::Custom)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of directed edges.
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Reads the edge-list format: a header `n m`, then one `i j` per line.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader
            .lines()
            .map(|l| l.map(|s| s.trim().to_string()))
            .filter(|l| l.as_ref().map(|s| !s.is_empty() && !s.starts_with('#')).unwrap_or(true));
        let header = lines
            .next()
            .ok_or_else(|| GbbError::Parse("empty edge list".into()))??;
        let (n, m) = parse_pair(&header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            edges.push(parse_pair(&line?)?);
        }
        if edges.len() != m {
            return Err(GbbError::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Self::from_edges(n, edges)
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.n_nodes, self.n_edges())?;
        for (i, j) in &self.edges {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|e| GbbError::Parse(format!("'{t}': {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(GbbError::Parse(format!("expected two integers, got '{line}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_valid(g: &Graph) {
        for &(i, j) in g.edges() {
            assert_ne!(i, j);
            assert!(g.has_edge(j, i), "missing reverse of ({i},{j})");
        }
        assert_eq!(g.n_edges() % 2, 0);
        let from_neighbors: usize = (0..g.n_nodes()).map(|i| g.neighbors(i).len()).sum();
        assert_eq!(from_neighbors, g.n_edges());
        for i in 0..g.n_nodes() {
            for &j in g.neighbors(i) {
                assert!(g.has_edge(i, j));
            }
        }
    }

    #[test]
    fn star_counts() {
        assert_eq!(Graph::star(4).unwrap().n_edges(), 6);
        assert_eq!(Graph::star(79).unwrap().n_edges(), 156);
        assert_eq!(Graph::star(2).unwrap().edges(), &[(0, 1), (1, 0)]);
        assert!(matches!(Graph::star(1), Err(GbbError::InvalidSize(_))));
    }

    #[test]
    fn complete_counts() {
        assert_eq!(Graph::complete(13).unwrap().n_edges(), 156);
        let enumerated = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|(i, j)| i != j).count();
        assert_eq!(Graph::complete(4).unwrap().n_edges(), enumerated);
        assert_eq!(Graph::complete(2).unwrap(), {
            let mut s = Graph::star(2).unwrap();
            s.kind = GraphKind::Complete;
            s
        });
    }

    #[test]
    fn circle_counts() {
        assert_eq!(Graph::circle(78).unwrap().n_edges(), 156);
        assert_eq!(Graph::circle(3).unwrap().edges(), Graph::complete(3).unwrap().edges());
        let c5 = Graph::circle(5).unwrap();
        assert!((0..5).all(|i| c5.neighbors(i).len() == 2));
        assert!(Graph::circle(2).is_err());
    }

    #[test]
    fn matching_counts() {
        assert_eq!(Graph::matching(156).unwrap().n_edges(), 156);
        assert_eq!(Graph::matching(2).unwrap().edges(), &[(0, 1), (1, 0)]);
        assert!(Graph::matching(5).is_err());

        // connected components of matching(6): union-find by hand
        let g = Graph::matching(6).unwrap();
        let mut comp: Vec<usize> = (0..6).collect();
        for &(i, j) in g.edges() {
            let (a, b) = (comp[i], comp[j]);
            for c in comp.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
        }
        let distinct: BTreeSet<_> = comp.into_iter().collect();
        assert_eq!(distinct.len(), 3);
        // no two undirected links share a node
        assert!((0..6).all(|i| g.neighbors(i).len() == 1));
    }

    #[test]
    fn generators_satisfy_invariants() {
        for n in 3..12 {
            assert_valid(&Graph::star(n).unwrap());
            assert_valid(&Graph::complete(n).unwrap());
            assert_valid(&Graph::circle(n).unwrap());
            assert_eq!(Graph::star(n).unwrap().n_edges(), 2 * (n - 1));
            assert_eq!(Graph::complete(n).unwrap().n_edges(), n * (n - 1));
            assert_eq!(Graph::circle(n).unwrap().n_edges(), 2 * n);
        }
        for n in (2..20).step_by(2) {
            let g = Graph::matching(n).unwrap();
            assert_valid(&g);
            assert_eq!(g.n_edges(), n);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_valid(&Graph::erdos_renyi(7, 0.5, &mut rng).unwrap());
        }
    }

    #[test]
    fn edge_count_realizability() {
        for m in [12, 30, 56, 90, 132, 156] {
            for kind in GraphKind::FAMILIES {
                let g = Graph::with_edge_count(kind, m).unwrap();
                assert_eq!(g.n_edges(), m, "{kind} m={m}");
            }
        }
        assert!(Graph::with_edge_count(GraphKind::Complete, 10).is_err());
        assert!(Graph::with_edge_count(GraphKind::Circle, 4).is_err());
        assert!(Graph::with_edge_count(GraphKind::Star, 7).is_err());
    }

    #[test]
    fn rejects_bad_custom_graphs() {
        assert!(matches!(Graph::from_edges(3, [(0, 1)]), Err(GbbError::InvalidGraph(_))));
        assert!(matches!(Graph::from_edges(3, [(1, 1)]), Err(GbbError::InvalidGraph(_))));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2), (2, 0)]),
            Err(GbbError::IndexOutOfRange { .. })
        ));
        let g = Graph::from_edges(3, [(2, 0), (0, 2), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 0), (2, 0)]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::circle(5).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("5 10\n0 1\n"));
        let back = Graph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(Graph::read_edge_list("3 2\n0 1\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("3 1\n0 1\n".as_bytes()).is_err());
    }
}
