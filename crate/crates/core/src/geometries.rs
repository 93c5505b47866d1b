//! Levi graphs of finite incidence structures over GF(q).
//!
//! Every generator lists points before lines, each side in lexicographic
//! order of its field-element coordinates, so the output is byte-identical
//! across runs. Labels use `_` separated field-element ids.

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FiniteField};
use crate::graph::{Graph, GraphBuilder};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Point,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Projective { q: u64 },
    Affine { q: u64 },
    Biaffine { q: u64 },
    TransversalDesign { t: u64, q: u64 },
    SymplecticGq { q: u64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Projective { q } => write!(f, "projective q={q}"),
            Family::Affine { q } => write!(f, "affine q={q}"),
            Family::Biaffine { q } => write!(f, "biaffine q={q}"),
            Family::TransversalDesign { t, q } => write!(f, "td t={t} q={q}"),
            Family::SymplecticGq { q } => write!(f, "symplectic-gq q={q}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeviGraph {
    pub graph: Graph,
    /// Side of each vertex, indexed like `graph`.
    pub sides: Vec<Side>,
    pub family: Family,
}

impl LeviGraph {
    /// Header line recorded in edge-list output.
    pub fn header(&self) -> String {
        format!("generator: {}", self.family)
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sides.len()).filter(|&v| self.sides[v] == Side::Point)
    }

    pub fn lines(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sides.len()).filter(|&v| self.sides[v] == Side::Line)
    }
}

/// Largest q accepted by [`symplectic_gq_levi`].
pub const MAX_GQ_ORDER: u64 = 9;

fn label(prefix: &str, coords: &[FieldElem]) -> String {
    let mut s = prefix.to_string();
    for c in coords {
        s.push('_');
        s.push_str(&c.to_string());
    }
    s
}

/// Normalized representatives (first nonzero coordinate 1) of the
/// projective points of GF(q)^dim, in lexicographic order.
fn projective_points(f: &FiniteField, dim: usize) -> Vec<Vec<FieldElem>> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    for code in 0..q.pow(dim as u32) {
        let mut v = Vec::with_capacity(dim);
        let mut c = code;
        for _ in 0..dim {
            v.push(f.elem((c % q) as u32));
            c /= q;
        }
        v.reverse();
        if v.iter().find(|x| !x.is_zero()) == Some(&f.one()) {
            out.push(v);
        }
    }
    out
}

fn dot(f: &FiniteField, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter().zip(b).fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Assembles a Levi graph from point labels and lines given as point-index
/// sets, after checking that two points share at most one line.
fn assemble(family: Family, point_labels: Vec<String>, lines: Vec<(String, Vec<usize>)>) -> Result<LeviGraph> {
    let mut covered = HashSet::new();
    for (name, pts) in &lines {
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                if !covered.insert((a.min(b), a.max(b))) {
                    return Err(Error::BadInput(format!(
                        "{family}: points {a} and {b} share a second line at {name}"
                    )));
                }
            }
        }
    }
    let mut b = GraphBuilder::new();
    for l in &point_labels {
        b.vertex(l);
    }
    let np = point_labels.len();
    for (name, pts) in &lines {
        let li = b.vertex(name);
        for &p in pts {
            b.edge_by_index(p, li)?;
        }
    }
    let graph = b.build()?;
    let mut sides = vec![Side::Point; np];
    sides.resize(graph.vertex_count(), Side::Line);
    Ok(LeviGraph { graph, sides, family })
}

/// Incidence graph of PG(2, q).
pub fn projective_levi(q: u64) -> Result<LeviGraph> {
    let f = FiniteField::new(q)?;
    let pts = projective_points(&f, 3);
    let lines = pts
        .iter()
        .map(|l| {
            let on: Vec<usize> = (0..pts.len()).filter(|&i| dot(&f, &pts[i], l).is_zero()).collect();
            (label("L", l), on)
        })
        .collect();
    let point_labels = pts.iter().map(|p| label("p", p)).collect();
    assemble(Family::Projective { q }, point_labels, lines)
}

fn affine_points(f: &FiniteField) -> Vec<(FieldElem, FieldElem)> {
    let els: Vec<FieldElem> = f.elements().collect();
    els.iter().flat_map(|&x| els.iter().map(move |&y| (x, y))).collect()
}

fn sloped_lines(f: &FiniteField, pts: &[(FieldElem, FieldElem)]) -> Vec<(String, Vec<usize>)> {
    let mut lines = Vec::new();
    for m in f.elements() {
        for b in f.elements() {
            let on = (0..pts.len())
                .filter(|&i| {
                    let (x, y) = pts[i];
                    y == f.add(f.mul(m, x), b)
                })
                .collect();
            lines.push((label("l", &[m, b]), on));
        }
    }
    lines
}

/// Incidence graph of the affine plane AG(2, q): points `(x,y)`, lines
/// `[m,b]` (y = mx + b) and vertical lines `[inf,a]` (x = a).
pub fn affine_levi(q: u64) -> Result<LeviGraph> {
    let f = FiniteField::new(q)?;
    let pts = affine_points(&f);
    let mut lines = sloped_lines(&f, &pts);
    for a in f.elements() {
        let on = (0..pts.len()).filter(|&i| pts[i].0 == a).collect();
        lines.push((format!("l_inf_{a}"), on));
    }
    let point_labels = pts.iter().map(|&(x, y)| label("p", &[x, y])).collect();
    assemble(Family::Affine { q }, point_labels, lines)
}

/// Incidence graph of the biaffine plane: the affine plane without its
/// vertical lines.
pub fn biaffine_levi(q: u64) -> Result<LeviGraph> {
    let f = FiniteField::new(q)?;
    let pts = affine_points(&f);
    let lines = sloped_lines(&f, &pts);
    let point_labels = pts.iter().map(|&(x, y)| label("p", &[x, y])).collect();
    assemble(Family::Biaffine { q }, point_labels, lines)
}

/// Levi graph of the transversal design TD(t, q) built from the field Latin
/// squares `L_a(i, j) = a*i + j`. Part `i < q` is indexed by the `i`-th field
/// element; when `t = q + 1` the extra part records the slope `a`.
pub fn transversal_design_levi(t: u64, q: u64) -> Result<LeviGraph> {
    let f = FiniteField::new(q)?;
    if t < 3 || t > q + 1 {
        return Err(Error::BadParams(format!("TD needs 3 <= t <= q+1, got t={t}, q={q}")));
    }
    let (t, qu) = (t as usize, q as usize);
    let els: Vec<FieldElem> = f.elements().collect();
    let point = |part: usize, sym: FieldElem| part * qu + sym.id() as usize;
    let point_labels: Vec<String> = (0..t)
        .flat_map(|i| els.iter().map(move |s| format!("P_{i}_{s}")))
        .collect();
    let mut lines = Vec::new();
    for &a in &els {
        for &y in &els {
            let mut on: Vec<usize> = (0..t.min(qu)).map(|i| point(i, f.add(f.mul(a, els[i]), y))).collect();
            if t == qu + 1 {
                on.push(point(qu, a));
            }
            lines.push((format!("B_{a}_{y}"), on));
        }
    }
    // every cross-part pair is covered (at most once is checked by assemble)
    let pairs: usize = lines.iter().map(|(_, b)| b.len() * (b.len() - 1) / 2).sum();
    if pairs != t * (t - 1) / 2 * qu * qu {
        return Err(Error::BadInput("transversal design does not cover every pair".into()));
    }
    assemble(Family::TransversalDesign { t: t as u64, q }, point_labels, lines)
}

/// Incidence graph of the symplectic generalized quadrangle W(3, q): points
/// of PG(3, q) and the lines that are totally isotropic for
/// `x1*y2 - x2*y1 + x3*y4 - x4*y3`. Lines are numbered in lexicographic
/// order of their sorted point sets.
pub fn symplectic_gq_levi(q: u64) -> Result<LeviGraph> {
    let f = FiniteField::new(q)?;
    if q > MAX_GQ_ORDER {
        return Err(Error::BadParams(format!(
            "symplectic quadrangle needs q <= {MAX_GQ_ORDER}"
        )));
    }
    let pts = projective_points(&f, 4);
    let index: HashMap<Vec<FieldElem>, usize> = pts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let form = |x: &[FieldElem], y: &[FieldElem]| {
        let a = f.sub(f.mul(x[0], y[1]), f.mul(x[1], y[0]));
        let b = f.sub(f.mul(x[2], y[3]), f.mul(x[3], y[2]));
        f.add(a, b)
    };
    let normalize = |v: Vec<FieldElem>| -> Vec<FieldElem> {
        let lead = *v.iter().find(|x| !x.is_zero()).expect("nonzero vector");
        let s = f.inv(lead).expect("nonzero lead");
        v.into_iter().map(|x| f.mul(s, x)).collect()
    };
    let mut line_sets = BTreeSet::new();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            if !form(x, y).is_zero() {
                continue;
            }
            let mut on = vec![i];
            for l in f.elements() {
                let w: Vec<FieldElem> = x.iter().zip(y).map(|(&a, &b)| f.add(b, f.mul(l, a))).collect();
                on.push(index[&normalize(w)]);
            }
            on.sort_unstable();
            line_sets.insert(on);
        }
    }
    let lines = line_sets
        .into_iter()
        .enumerate()
        .map(|(k, on)| (format!("l_{k}"), on))
        .collect();
    let point_labels = pts.iter().map(|p| label("p", p)).collect();
    let levi = assemble(Family::SymplecticGq { q }, point_labels, lines)?;

    let g = &levi.graph;
    let ok = g.girth() == Some(8) && g.diameter() == Some(4) && g.valence_range() == (q as usize + 1, q as usize + 1);
    if !ok {
        return Err(Error::BadInput(format!(
            "W(3,{q}) failed the generalized quadrangle check"
        )));
    }
    Ok(levi)
}
