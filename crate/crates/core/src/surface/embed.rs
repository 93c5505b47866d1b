use super::Complex2D;
use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationStrategy {
    /// Neighbors in index order at every vertex.
    Index,
    /// Index order except at the given vertex, where it is reversed.
    Twisted(usize),
}

impl fmt::Display for RotationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationStrategy::Index => write!(f, "index"),
            RotationStrategy::Twisted(v) => write!(f, "twisted at {v}"),
        }
    }
}

/// Cyclic order of neighbors at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<usize>>,
    pos: Vec<HashMap<usize, usize>>,
}

impl RotationSystem {
    /// Checks that each order is a permutation of the neighbors.
    pub fn from_orders(g: &Graph, order: Vec<Vec<usize>>) -> Result<RotationSystem> {
        if order.len() != g.vertex_count() {
            return Err(Error::BadInput("one cyclic order per vertex required".into()));
        }
        for (v, o) in order.iter().enumerate() {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(v) {
                return Err(Error::BadInput(format!(
                    "order at {} is not a permutation of its neighbors",
                    g.name(v)
                )));
            }
        }
        let pos = order
            .iter()
            .map(|o| o.iter().enumerate().map(|(i, &w)| (w, i)).collect())
            .collect();
        Ok(RotationSystem { order, pos })
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.order[v]
    }

    /// The neighbor after `u` in the cyclic order at `v`.
    pub fn successor(&self, v: usize, u: usize) -> usize {
        let o = &self.order[v];
        o[(self.pos[v][&u] + 1) % o.len()]
    }
}

pub fn rotation_system(g: &Graph, strategy: RotationStrategy) -> Result<RotationSystem> {
    if !g.is_connected() || g.valence_range().0 < 2 || !g.is_two_edge_connected() {
        return Err(Error::BadInput(
            "rotation systems need a connected, 2-edge-connected graph".into(),
        ));
    }
    let mut order: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| g.neighbors(v).to_vec()).collect();
    if let RotationStrategy::Twisted(v) = strategy {
        order
            .get_mut(v)
            .ok_or_else(|| Error::BadInput(format!("no vertex {v}")))?
            .reverse();
    }
    RotationSystem::from_orders(g, order)
}

/// Closed walk of darts `(v_i, v_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    pub darts: Vec<(usize, usize)>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Tail vertices in walk order.
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|d| d.0).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub faces: Vec<FaceWalk>,
    pub genus: usize,
}

/// Traces the faces of the cellular embedding given by `rot`.
pub fn face_walks(g: &Graph, rot: &RotationSystem) -> Result<Embedding> {
    let mut seen: HashMap<(usize, usize), bool> = HashMap::new();
    let mut faces = Vec::new();
    for u in 0..g.vertex_count() {
        for &v in rot.rotation(u) {
            if seen.contains_key(&(u, v)) {
                continue;
            }
            let mut darts = Vec::new();
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b), true).is_none() {
                darts.push((a, b));
                (a, b) = (b, rot.successor(b, a));
            }
            if darts.len() < 3 {
                return Err(Error::DegenerateFace(darts.len()));
            }
            faces.push(FaceWalk { darts });
        }
    }
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + faces.len() as i64;
    if chi > 2 || chi % 2 != 0 {
        return Err(Error::BadInput(format!(
            "Euler characteristic {chi} is not that of an orientable surface"
        )));
    }
    Ok(Embedding {
        faces,
        genus: ((2 - chi) / 2) as usize,
    })
}

/// Triangulates each face of the embedding with a ring of new vertices
/// and a central cone. `g` becomes the marked subcomplex `L`.
pub fn triangulate_faces(g: &Graph, rot: &RotationSystem) -> Result<Complex2D> {
    let emb = face_walks(g, rot)?;
    let mut k = Complex2D::from_graph(g);
    for (f, face) in emb.faces.iter().enumerate() {
        let vs = face.vertices();
        let n = vs.len();
        let ring: Vec<usize> = (0..n).map(|i| k.fresh(&format!("f{f}r{i}"))).collect();
        let c = k.fresh(&format!("f{f}c"));
        for i in 0..n {
            let j = (i + 1) % n;
            for t in [
                (vs[i], vs[j], ring[i]),
                (vs[j], ring[i], ring[j]),
                (ring[i], ring[j], c),
            ] {
                if !k.add_triangle(t.0, t.1, t.2)? {
                    return Err(Error::NotSimplicial(format!("face {f} repeats a triangle")));
                }
            }
        }
    }
    if !super::checks::is_closed_surface(&k) {
        return Err(Error::NotSimplicial(
            "triangulated embedding is not a closed surface".into(),
        ));
    }
    Ok(k)
}
