use super::{Cycle, Graph, Path};
use std::collections::HashSet;

/// Shortest cycle length admitted by the branching condition.
pub const MIN_CYCLE_LEN: usize = 5;

impl Graph {
    /// Induced cycles of length in `[5, maxlen]` that contain `spine` as a
    /// run of consecutive vertices, each returned as a vertex sequence that
    /// starts with `spine` and continues along the closing arc. Order is
    /// depth-first in vertex index order.
    ///
    /// Returns nothing if `spine` is not an induced path.
    pub fn induced_cycle_extensions(&self, spine: &[usize], maxlen: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if spine.len() < 2 || spine.iter().any(|&v| v >= self.vertex_count()) {
            return out;
        }
        if !self.is_induced_path(spine) || spine.len() + 1 > maxlen {
            return out;
        }
        let mut path = spine.to_vec();
        self.extend_closing(&mut path, maxlen, &mut out);
        out
    }

    fn extend_closing(&self, path: &mut Vec<usize>, maxlen: usize, out: &mut Vec<Vec<usize>>) {
        let head = path[0];
        let end = *path.last().unwrap();
        for &z in self.neighbors(end) {
            if path.contains(&z) {
                continue;
            }
            // z may touch only the current end and, when closing, the head
            let interior = &path[1..path.len() - 1];
            if interior.iter().any(|&p| self.adjacent(z, p)) {
                continue;
            }
            if self.adjacent(z, head) {
                let len = path.len() + 1;
                if len >= MIN_CYCLE_LEN && len <= maxlen {
                    let mut cyc = path.clone();
                    cyc.push(z);
                    out.push(cyc);
                }
                continue;
            }
            if path.len() + 2 <= maxlen {
                path.push(z);
                self.extend_closing(path, maxlen, out);
                path.pop();
            }
        }
    }

    /// Canonical induced cycles of length in `[5, maxlen]` through `spine`.
    pub fn induced_cycles_through(&self, spine: &[usize], maxlen: usize) -> Vec<Cycle> {
        self.induced_cycle_extensions(spine, maxlen)
            .iter()
            .map(|c| Cycle::from_sequence(c))
            .collect()
    }

    /// True iff every cycle contains `core` as a subpath, the cycles pairwise
    /// meet exactly in the vertices of `core`, and the union of their vertex
    /// sets spans exactly the union of their edges.
    pub fn is_induced_union_of_cycles(&self, cycles: &[Cycle], core: &Path) -> bool {
        let core_set: HashSet<usize> = core.vertices().iter().copied().collect();
        let mut union_vertices = HashSet::new();
        let mut union_edges = HashSet::new();
        for c in cycles {
            if !c.contains_subpath(core.vertices()) {
                return false;
            }
            for (a, b) in c.edges() {
                if !self.adjacent(a, b) {
                    return false;
                }
                union_edges.insert((a, b));
            }
            union_vertices.extend(c.vertices().iter().copied());
        }
        for (i, a) in cycles.iter().enumerate() {
            let sa: HashSet<usize> = a.vertices().iter().copied().collect();
            for b in &cycles[i + 1..] {
                let sb: HashSet<usize> = b.vertices().iter().copied().collect();
                if sa.intersection(&sb).copied().collect::<HashSet<_>>() != core_set {
                    return false;
                }
            }
        }
        let mut vs: Vec<usize> = union_vertices.into_iter().collect();
        vs.sort_unstable();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if self.adjacent(a, b) && !union_edges.contains(&(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// First induced cycle of length at least `min_len` found by searching
    /// from each vertex in index order as the cycle's least vertex.
    pub fn find_long_induced_cycle(&self, min_len: usize) -> Option<Cycle> {
        let min_len = min_len.max(3);
        for s in 0..self.vertex_count() {
            let mut path = vec![s];
            if let Some(c) = self.long_cycle_from(&mut path, min_len) {
                return Some(Cycle::from_sequence(&c));
            }
        }
        None
    }

    fn long_cycle_from(&self, path: &mut Vec<usize>, min_len: usize) -> Option<Vec<usize>> {
        let head = path[0];
        let end = *path.last().unwrap();
        for &z in self.neighbors(end) {
            if z <= head || path.contains(&z) {
                continue;
            }
            let interior = path.get(1..path.len() - 1).unwrap_or(&[]);
            if interior.iter().any(|&p| self.adjacent(z, p)) {
                continue;
            }
            if path.len() >= 2 && self.adjacent(z, head) {
                if path.len() + 1 >= min_len {
                    let mut c = path.clone();
                    c.push(z);
                    return Some(c);
                }
                continue;
            }
            path.push(z);
            let hit = self.long_cycle_from(path, min_len);
            path.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}
