use super::{Cycle, Graph, GraphBuilder};
use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use std::collections::VecDeque;

impl Graph {
    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[x] >= b) {
                    break;
                }
                for &y in self.neighbors(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Maximum eccentricity, `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for s in 0..self.vertex_count() {
            for d in self.distances_from(s) {
                diam = diam.max(d?);
            }
        }
        Some(diam)
    }

    /// `(min, max)` vertex degree; `(0, 0)` for the empty graph.
    pub fn valence_range(&self) -> (usize, usize) {
        let degs = (0..self.vertex_count()).map(|v| self.degree(v));
        let min = degs.clone().min().unwrap_or(0);
        let max = degs.max().unwrap_or(0);
        (min, max)
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(&FixedBitSet::with_capacity(self.vertex_count()))
    }

    /// Connectivity of the subgraph induced on the vertices not in `removed`.
    /// The empty graph counts as connected.
    pub fn is_connected_without(&self, removed: &FixedBitSet) -> bool {
        let n = self.vertex_count();
        let Some(start) = (0..n).find(|&v| !removed.contains(v)) else {
            return true;
        };
        let mut seen = removed.clone();
        seen.grow(n);
        seen.insert(start);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in self.neighbors(x) {
                if !seen.contains(y) {
                    seen.insert(y);
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count + removed.count_ones(..) == n
    }

    /// Two-colouring if bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let sx = side[x].unwrap();
                for &y in self.neighbors(x) {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            stack.push(y);
                        }
                        Some(sy) if sy == sx => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges()
            .all(|(a, b)| self.neighbor_set(a).is_disjoint(self.neighbor_set(b)))
    }

    /// True if consecutive vertices are adjacent, all are distinct, and no
    /// other pair is adjacent.
    pub fn is_induced_path(&self, vs: &[usize]) -> bool {
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                if a == b || self.adjacent(a, b) != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// The lexicographically least induced 4-cycle, if any.
    pub fn induced_square(&self) -> Option<Cycle> {
        let n = self.vertex_count();
        for a in 0..n {
            for &b in self.neighbors(a).iter().filter(|&&b| b > a) {
                for &c in self.neighbors(b) {
                    if c <= a || self.adjacent(a, c) {
                        continue;
                    }
                    for &d in self.neighbors(c) {
                        if d > b && self.adjacent(d, a) && !self.adjacent(b, d) {
                            return Some(Cycle::from_sequence(&[a, b, c, d]));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn has_induced_square(&self) -> bool {
        self.induced_square().is_some()
    }

    /// Girth-refined Euler test: `true` proves nonplanarity, `false` is
    /// inconclusive.
    pub fn euler_nonplanar(&self) -> bool {
        let Some(g) = self.girth() else {
            return false;
        };
        let (v, e) = (self.vertex_count() as i64, self.edge_count() as i64);
        let g = g as i64;
        e * (g - 2) > g * (v - 2)
    }

    /// Replaces each vertex `v` by a clique of `mult[v]` copies; copies of
    /// adjacent vertices are pairwise adjacent. Copies are labelled `v.i`
    /// (1-based) and ordered by `(v, i)`.
    pub fn clique_expand(&self, mult: &[usize]) -> Result<Graph> {
        if mult.len() != self.vertex_count() || mult.contains(&0) {
            return Err(Error::BadParams(
                "multiplicity must assign a positive integer to every vertex".into(),
            ));
        }
        let mut b = GraphBuilder::new();
        let mut first = Vec::with_capacity(mult.len());
        for (v, &k) in mult.iter().enumerate() {
            first.push(b.names.len());
            for i in 1..=k {
                b.vertex(&format!("{}.{}", self.name(v), i));
            }
        }
        for (v, &k) in mult.iter().enumerate() {
            for i in 0..k {
                for j in i + 1..k {
                    b.edge_by_index(first[v] + i, first[v] + j)?;
                }
            }
        }
        for (v, w) in self.edges() {
            for i in 0..mult[v] {
                for j in 0..mult[w] {
                    b.edge_by_index(first[v] + i, first[w] + j)?;
                }
            }
        }
        b.build()
    }

    /// False if some edge separates the graph (or the graph is disconnected).
    pub fn is_two_edge_connected(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        // an edge is a bridge iff removing it disconnects its endpoints
        self.edges().all(|(a, b)| {
            let mut seen = FixedBitSet::with_capacity(self.vertex_count());
            seen.insert(a);
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if (x, y) == (a, b) || seen.contains(y) {
                        continue;
                    }
                    seen.insert(y);
                    stack.push(y);
                }
            }
            seen.contains(b)
        })
    }
}
