//! Device coupling graphs.
//!
//! Edges are undirected. The text format is a node-count line followed by one
//! `u v` pair per line; blank lines and `#` comments are ignored.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

const Q20_EDGES: &str = include_str!("q20.edges");
const ROCHESTER_EDGES: &str = include_str!("rochester.edges");

/// Largest accepted device; the distance matrix is dense.
pub const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArchError {
    #[error("unknown architecture `{0}` (expected q20, rochester or file:<path>)")]
    UnknownArchitecture(String),
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("coupling graph is disconnected (node {0} unreachable from node 0)")]
    DisconnectedGraph(usize),
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Built-in device topologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// IBM Q20 Tokyo, 20 qubits.
    Q20,
    /// IBM Rochester, 53 qubits.
    Rochester,
}

impl FromStr for Builtin {
    type Err = ArchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "q20" | "tokyo" => Ok(Builtin::Q20),
            "rochester" => Ok(Builtin::Rochester),
            _ => Err(ArchError::UnknownArchitecture(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CouplingGraph {
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
    diameter: usize,
}

impl CouplingGraph {
    /// Builds a graph from undirected edges. Duplicates (in either
    /// orientation) are merged.
    pub fn new(num_physical: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ArchError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ArchError::SelfLoop(u));
            }
            let hi = u.max(v);
            if hi >= num_physical {
                return Err(ArchError::Parse {
                    line: 0,
                    message: format!("node {hi} out of range for {num_physical} nodes"),
                });
            }
            set.insert((u.min(v), hi));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); num_physical];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let dist = bfs_all_pairs(&neighbors);
        if let Some(row) = dist.first() {
            if let Some(node) = row.iter().position(|&d| d == usize::MAX) {
                return Err(ArchError::DisconnectedGraph(node));
            }
        }
        let diameter = dist.iter().flatten().copied().max().unwrap_or(0);
        Ok(CouplingGraph {
            num_physical,
            edges,
            neighbors,
            dist,
            diameter,
        })
    }

    pub fn builtin(which: Builtin) -> Self {
        let text = match which {
            Builtin::Q20 => Q20_EDGES,
            Builtin::Rochester => ROCHESTER_EDGES,
        };
        load_edges(text).expect("embedded edge list is valid")
    }

    /// Resolves a CLI selector: `q20`, `rochester` or `file:<path>`.
    pub fn from_selector(selector: &str) -> Result<Self, ArchError> {
        if let Some(path) = selector.strip_prefix("file:") {
            let text = std::fs::read_to_string(Path::new(path)).map_err(|e| ArchError::Io {
                path: path.to_string(),
                message: e.to_string(),
            })?;
            return load_edges(&text);
        }
        Ok(Self::builtin(selector.parse()?))
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    /// Edges as `(low, high)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    pub fn distances(&self) -> &[Vec<usize>] {
        &self.dist
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.dist[a][b] == 1
    }

    pub fn eccentricity(&self, node: usize) -> usize {
        self.dist[node].iter().copied().max().unwrap_or(0)
    }

    /// Minimum-eccentricity node; ties go to higher degree, then lower index.
    pub fn center(&self) -> usize {
        (0..self.num_physical)
            .min_by_key(|&n| (self.eccentricity(n), std::cmp::Reverse(self.degree(n)), n))
            .unwrap_or(0)
    }
}

impl fmt::Display for CouplingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.num_physical)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Hop distances from every node by repeated BFS; unreachable pairs are
/// `usize::MAX`.
pub fn bfs_all_pairs(neighbors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = neighbors.len();
    let mut dist = vec![vec![usize::MAX; n]; n];
    let mut queue = VecDeque::with_capacity(n);
    for (source, row) in dist.iter_mut().enumerate() {
        row[source] = 0;
        queue.clear();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbors[u] {
                if row[v] == usize::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    dist
}

/// Distance matrix of `graph` (already computed at construction).
pub fn all_pairs(graph: &CouplingGraph) -> Vec<Vec<usize>> {
    graph.dist.clone()
}

pub fn load_edges(text: &str) -> Result<CouplingGraph, ArchError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first_line, header) = lines.next().ok_or(ArchError::Parse {
        line: 1,
        message: "missing node count".into(),
    })?;
    let num_physical: usize = header.parse().map_err(|_| ArchError::Parse {
        line: first_line,
        message: format!("invalid node count `{header}`"),
    })?;
    if num_physical == 0 || num_physical > MAX_NODES {
        return Err(ArchError::Parse {
            line: first_line,
            message: format!("node count must be in 1..={MAX_NODES}"),
        });
    }
    let mut edges = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| ArchError::Parse {
                line,
                message: format!("invalid node `{s}`"),
            })
        };
        if fields.len() != 2 {
            return Err(ArchError::Parse {
                line,
                message: format!("expected `u v`, found `{content}`"),
            });
        }
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u.max(v) >= num_physical {
            return Err(ArchError::Parse {
                line,
                message: format!("node {} out of range for {num_physical} nodes", u.max(v)),
            });
        }
        if u == v {
            return Err(ArchError::SelfLoop(u));
        }
        edges.push((u, v));
    }
    CouplingGraph::new(num_physical, edges)
}
