//! Simple undirected graphs with named vertices and bitset adjacency.
//!
//! Vertex indices are assigned in construction order and never change; every
//! search in the crate iterates in index order so results are reproducible.

mod cycles;
mod format;
mod invariants;
mod separation;

pub use format::{parse_edge_list, parse_word};
pub use separation::{CutKind, Separability, SeparatingSet};

use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt;

pub const MAX_VERTICES: usize = 4096;

#[derive(Clone)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<FixedBitSet>,
    nbrs: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={}, E={})", self.vertex_count(), self.edge_count)
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.nbrs == other.nbrs
    }
}

impl Eq for Graph {}

/// Incremental constructor; duplicate edges are merged, loops rejected.
#[derive(Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `name`, adding it if new.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn edge_by_index(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::BadInput(format!("loop at {}", self.names[a])));
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn edge(&mut self, a: &str, b: &str) -> Result<()> {
        let (a, b) = (self.vertex(a), self.vertex(b));
        self.edge_by_index(a, b)
    }

    pub fn build(self) -> Result<Graph> {
        let n = self.names.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices);
        }
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let nbrs: Vec<Vec<usize>> = adj.iter().map(|s| s.ones().collect()).collect();
        let edge_count = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Graph {
            names: self.names,
            index: self.index,
            adj,
            nbrs,
            edge_count,
        })
    }
}

impl Graph {
    /// Builds a graph from labels and index pairs.
    pub fn from_edges<S: AsRef<str>>(names: &[S], edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for name in names {
            let before = b.names.len();
            b.vertex(name.as_ref());
            if b.names.len() == before {
                return Err(Error::BadInput(format!("duplicate label {}", name.as_ref())));
            }
        }
        for &(x, y) in edges {
            if x >= names.len() || y >= names.len() {
                return Err(Error::BadInput(format!("edge ({x},{y}) out of range")));
            }
            b.edge_by_index(x, y)?;
        }
        b.build()
    }

    /// Cycle on `n` vertices labelled `0..n`.
    pub fn cycle(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(&names, &edges).expect("valid cycle")
    }

    /// Path with `n` vertices labelled `0..n`.
    pub fn path(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(&names, &edges).expect("valid path")
    }

    pub fn complete(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(&names, &edges).expect("valid clique")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Neighbors of `v` in increasing index order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nbrs
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    pub fn labels_of(&self, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| self.names[v].clone()).collect()
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::BadInput(format!("unknown vertex {}", l.as_ref())))
            })
            .collect()
    }

    /// Hex SHA-256 of the canonical edge-list serialization.
    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_edge_list(&[]).as_bytes()))
    }
}

/// An induced path with 2 or 3 vertices (length 1 or 2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Path> {
        let ok_len = matches!(vertices.len(), 2 | 3);
        let in_range = vertices.iter().all(|&v| v < g.vertex_count());
        if !ok_len || !in_range || !g.is_induced_path(&vertices) {
            return Err(Error::BadPath(format!(
                "{vertices:?} is not an induced path of length 1 or 2"
            )));
        }
        Ok(Path(vertices))
    }

    /// Wraps a sequence the caller has already checked.
    pub(crate) fn trusted(vertices: Vec<usize>) -> Path {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A cycle stored in canonical form: the lexicographically least sequence
/// among all rotations and reflections.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Canonicalizes a cyclic vertex sequence. Adjacency is not checked.
    pub fn from_sequence(seq: &[usize]) -> Cycle {
        assert!(seq.len() >= 3, "cycle needs at least 3 vertices");
        let n = seq.len();
        let start = (0..n).min_by_key(|&i| seq[i]).unwrap();
        let fwd: Vec<usize> = (0..n).map(|i| seq[(start + i) % n]).collect();
        let bwd: Vec<usize> = (0..n).map(|i| seq[(start + n - i) % n]).collect();
        Cycle(fwd.min(bwd))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Cyclically consecutive vertex pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % n]);
            (a.min(b), a.max(b))
        })
    }

    /// True if `path` occurs as a run of consecutive vertices, in either direction.
    pub fn contains_subpath(&self, path: &[usize]) -> bool {
        let n = self.0.len();
        if path.len() > n {
            return false;
        }
        let Some(start) = self.0.iter().position(|&v| v == path[0]) else {
            return false;
        };
        let fwd = path.iter().enumerate().all(|(i, &v)| self.0[(start + i) % n] == v);
        let bwd = path.iter().enumerate().all(|(i, &v)| self.0[(start + n - i) % n] == v);
        fwd || bwd
    }
}
