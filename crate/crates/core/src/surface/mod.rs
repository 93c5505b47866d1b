//! Two-dimensional simplicial complexes: embedding a graph in a closed
//! orientable surface, relative subdivisions, and surface checks.

mod checks;
mod embed;
mod subdivide;

pub use checks::{surface_checks, SurfaceReport};
pub use embed::{
    face_walks, rotation_system, triangulate_faces, Embedding, FaceWalk, RotationStrategy, RotationSystem,
};
pub use subdivide::{fns_subdivide, partial_barycentric, pattern_a, pattern_b};

use crate::bounds::confdim_lower_branching;
use crate::branching::BranchingCertificate;
use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

pub const MAX_COMPLEX_VERTICES: usize = 1 << 20;

/// Simplicial complex of dimension at most two with a marked subcomplex
/// `L`. `L` consists of marked vertices and marked edges; its triangles are
/// the triangles whose three sides are marked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex2D {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    triangles: BTreeSet<[usize; 3]>,
    l_vertices: BTreeSet<usize>,
    l_edges: BTreeSet<(usize, usize)>,
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn tri(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

fn sides(t: [usize; 3]) -> [(usize, usize); 3] {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
}

impl Complex2D {
    pub fn new() -> Complex2D {
        Complex2D::default()
    }

    /// Index of the vertex called `name`, adding it if absent.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    /// A new vertex named `stem`, primed until the name is unused.
    pub fn fresh(&mut self, stem: &str) -> usize {
        let mut name = stem.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        self.vertex(&name)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || a >= self.names.len() || b >= self.names.len() {
            return Err(Error::NotSimplicial(format!("bad edge {a}-{b}")));
        }
        self.edges.insert(edge(a, b));
        Ok(())
    }

    /// Adds a triangle and its sides. Returns false if it was present.
    pub fn add_triangle(&mut self, a: usize, b: usize, c: usize) -> Result<bool> {
        if a == b || b == c || a == c {
            return Err(Error::NotSimplicial(format!("degenerate triangle {a} {b} {c}")));
        }
        let t = tri(a, b, c);
        for (x, y) in sides(t) {
            self.add_edge(x, y)?;
        }
        Ok(self.triangles.insert(t))
    }

    pub fn mark_l_vertex(&mut self, v: usize) {
        self.l_vertices.insert(v);
    }

    /// Marks an existing edge and its endpoints as part of `L`.
    pub fn mark_l_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let e = edge(a, b);
        if !self.edges.contains(&e) {
            return Err(Error::BadInput(format!(
                "{}-{} is not an edge",
                self.name(a),
                self.name(b)
            )));
        }
        self.l_vertices.insert(a);
        self.l_vertices.insert(b);
        self.l_edges.insert(e);
        Ok(())
    }

    /// Sets `L` to the full subcomplex spanned by `vs`.
    pub fn mark_induced_l(&mut self, vs: &[usize]) {
        self.l_vertices.extend(vs.iter().copied());
        let l = &self.l_vertices;
        let marked: Vec<_> = self
            .edges
            .iter()
            .filter(|(a, b)| l.contains(a) && l.contains(b))
            .copied()
            .collect();
        self.l_edges.extend(marked);
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.names.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
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

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn triangles(&self) -> &BTreeSet<[usize; 3]> {
        &self.triangles
    }

    pub fn l_vertices(&self) -> &BTreeSet<usize> {
        &self.l_vertices
    }

    pub fn l_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.l_edges
    }

    pub fn is_l_edge(&self, a: usize, b: usize) -> bool {
        self.l_edges.contains(&edge(a, b))
    }

    pub fn is_l_triangle(&self, t: [usize; 3]) -> bool {
        sides(t).iter().all(|&(a, b)| self.is_l_edge(a, b))
    }

    /// Sorted neighbor lists of the 1-skeleton.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for n in &mut adj {
            n.sort_unstable();
        }
        adj
    }

    /// Vertices and edges of `g` as a one-dimensional complex with `L` equal
    /// to all of it.
    pub fn from_graph(g: &Graph) -> Complex2D {
        let mut k = Complex2D::new();
        for n in g.names() {
            k.vertex(n);
        }
        for (a, b) in g.edges() {
            k.edges.insert(edge(a, b));
        }
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        k.mark_induced_l(&all);
        k
    }
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    vertices: Vec<String>,
    triangles: Vec<[usize; 3]>,
    #[serde(rename = "L_vertices")]
    l_vertices: Vec<usize>,
    #[serde(rename = "L_edges", default, skip_serializing_if = "Option::is_none")]
    l_edges: Option<Vec<[usize; 2]>>,
    /// Edges lying in no triangle.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edges: Vec<[usize; 2]>,
}

impl Complex2D {
    pub fn to_json(&self) -> String {
        let in_triangles: BTreeSet<(usize, usize)> = self.triangles.iter().flat_map(|&t| sides(t)).collect();
        let doc = ComplexJson {
            vertices: self.names.clone(),
            triangles: self.triangles.iter().copied().collect(),
            l_vertices: self.l_vertices.iter().copied().collect(),
            l_edges: Some(self.l_edges.iter().map(|&(a, b)| [a, b]).collect()),
            edges: self.edges.difference(&in_triangles).map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Loads a complex. Without `L_edges`, `L` is the full subcomplex on
    /// `L_vertices`.
    pub fn from_json(text: &str) -> Result<Complex2D> {
        let doc: ComplexJson = serde_json::from_str(text)?;
        if doc.vertices.len() > MAX_COMPLEX_VERTICES {
            return Err(Error::TooManyVertices);
        }
        let mut k = Complex2D::new();
        for n in &doc.vertices {
            if k.index.contains_key(n) {
                return Err(Error::BadInput(format!("duplicate vertex {n:?}")));
            }
            k.vertex(n);
        }
        let nv = k.vertex_count();
        let check = |v: usize| {
            if v < nv {
                Ok(v)
            } else {
                Err(Error::BadInput(format!("vertex index {v} out of range")))
            }
        };
        for [a, b, c] in doc.triangles {
            if !k.add_triangle(check(a)?, check(b)?, check(c)?)? {
                return Err(Error::NotSimplicial(format!("duplicate triangle {a} {b} {c}")));
            }
        }
        for [a, b] in doc.edges {
            k.add_edge(check(a)?, check(b)?)?;
        }
        let lv = doc.l_vertices.into_iter().map(check).collect::<Result<Vec<_>>>()?;
        match doc.l_edges {
            Some(le) => {
                for v in lv {
                    k.mark_l_vertex(v);
                }
                for [a, b] in le {
                    k.mark_l_edge(check(a)?, check(b)?)?;
                }
            }
            None => k.mark_induced_l(&lv),
        }
        Ok(k)
    }

    /// OFF file. Vertices are placed on a Fibonacci sphere lattice since
    /// the complex carries no geometry.
    pub fn to_off(&self) -> String {
        let n = self.vertex_count().max(1) as f64;
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let mut out = format!("OFF\n{} {} 0\n", self.vertex_count(), self.triangle_count());
        for i in 0..self.vertex_count() {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n;
            let r = (1.0 - z * z).sqrt();
            let th = golden * i as f64;
            let _ = writeln!(out, "{:.6} {:.6} {:.6}", r * th.cos(), r * th.sin(), z);
        }
        for t in &self.triangles {
            let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
        }
        out
    }
}

// ---- pipeline ----

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOutput {
    #[serde(skip)]
    pub complex: Complex2D,
    pub rotation: RotationStrategy,
    pub genus: usize,
    pub report: SurfaceReport,
    /// Every input edge is an edge of the output.
    pub edges_intact: bool,
    /// No output edge joins two input vertices unless it is an input edge.
    pub graph_full: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confdim_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_sha256: Option<String>,
}

impl PipelineOutput {
    pub fn passed(&self) -> bool {
        let r = &self.report;
        r.is_closed_surface
            && r.is_orientable
            && r.genus.is_some_and(|g| g >= 1)
            && r.is_flag
            && !r.has_induced_square
            && r.l_full
            && self.edges_intact
            && self.graph_full
    }
}

/// Whether `g` sits in `k` as a full subgraph with no edge subdivided.
/// Vertices are matched by name.
pub fn graph_embedding_check(g: &Graph, k: &Complex2D) -> (bool, bool) {
    let ix: Vec<Option<usize>> = g.names().iter().map(|n| k.index_of(n)).collect();
    let intact = ix.iter().all(Option::is_some) && g.edges().all(|(a, b)| k.has_edge(ix[a].unwrap(), ix[b].unwrap()));
    let back: HashMap<usize, usize> = ix.iter().enumerate().filter_map(|(i, v)| v.map(|v| (v, i))).collect();
    let full = k.edges().iter().all(|(a, b)| match (back.get(a), back.get(b)) {
        (Some(&x), Some(&y)) => g.adjacent(x, y),
        _ => true,
    });
    (intact, full)
}

/// Embeds a graph of girth at least 5 as a full subgraph of a flag-no-square
/// triangulation of a closed orientable surface of positive genus.
pub fn pontryagin_pipeline(g: &Graph, cert: Option<&BranchingCertificate>) -> Result<PipelineOutput> {
    if g.girth().is_some_and(|girth| girth < 5) {
        return Err(Error::BadInput("graph has girth below 5".into()));
    }
    if let Some(c) = cert {
        if c.graph_sha256 != g.sha256() {
            return Err(Error::BadInput("certificate is for a different graph".into()));
        }
    }
    let mut chosen = None;
    let strategies =
        std::iter::once(RotationStrategy::Index).chain((0..g.vertex_count()).map(RotationStrategy::Twisted));
    for s in strategies {
        let rot = rotation_system(g, s)?;
        let emb = face_walks(g, &rot)?;
        if emb.genus >= 1 {
            chosen = Some((s, rot, emb.genus));
            break;
        }
    }
    let Some((rotation, rot, genus)) = chosen else {
        return Err(Error::BadInput("no rotation system of positive genus found".into()));
    };
    let k = triangulate_faces(g, &rot)?;
    let k = partial_barycentric(&k);
    let k = fns_subdivide(&k)?;
    let report = surface_checks(&k);
    let (edges_intact, graph_full) = graph_embedding_check(g, &k);
    Ok(PipelineOutput {
        complex: k,
        rotation,
        genus,
        report,
        edges_intact,
        graph_full,
        confdim_bound: cert
            .map(|c| confdim_lower_branching(c.n as u64, c.m as u64))
            .transpose()?,
        certificate_sha256: cert.map(|c| {
            use sha2::{Digest, Sha256};
            hex::encode(Sha256::digest(c.to_json(g).as_bytes()))
        }),
    })
}
