use super::Graph;
use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use serde::Serialize;

/// Shape of a separating set in a triangle-free graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutKind {
    Disconnected,
    CutVertex,
    CutPair,
    CutEdge,
    CutTwoPath,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatingSet {
    pub kind: CutKind,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separability {
    Inseparable,
    Separated(SeparatingSet),
}

impl Separability {
    pub fn is_inseparable(&self) -> bool {
        matches!(self, Separability::Inseparable)
    }
}

impl Graph {
    /// Exhaustive check for the four cut-set shapes that matter in a
    /// triangle-free graph: a vertex, a non-adjacent pair, an edge, and an
    /// induced 2-path. The first separating set in that order (and in index
    /// order within each shape) is returned as the witness.
    pub fn separability(&self) -> Result<Separability> {
        if !self.is_triangle_free() {
            return Err(Error::NotTriangleFree);
        }
        if !self.is_connected() {
            return Ok(Separability::Separated(SeparatingSet {
                kind: CutKind::Disconnected,
                vertices: vec![],
            }));
        }
        let n = self.vertex_count();
        let cuts = |vs: &[usize]| {
            let mut removed = FixedBitSet::with_capacity(n);
            for &v in vs {
                removed.insert(v);
            }
            !self.is_connected_without(&removed)
        };
        let found = |kind, vertices: Vec<usize>| Ok(Separability::Separated(SeparatingSet { kind, vertices }));

        for v in 0..n {
            if cuts(&[v]) {
                return found(CutKind::CutVertex, vec![v]);
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) && cuts(&[a, b]) {
                    return found(CutKind::CutPair, vec![a, b]);
                }
            }
        }
        for (a, b) in self.edges() {
            if cuts(&[a, b]) {
                return found(CutKind::CutEdge, vec![a, b]);
            }
        }
        for w in 0..n {
            let ns = self.neighbors(w);
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    if cuts(&[a, w, b]) {
                        return found(CutKind::CutTwoPath, vec![a, w, b]);
                    }
                }
            }
        }
        Ok(Separability::Inseparable)
    }

    pub fn is_inseparable(&self) -> Result<bool> {
        Ok(self.separability()?.is_inseparable())
    }
}
