use super::checks::{is_flag, is_l_full};
use super::{edge, sides, Complex2D};
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// Copies the vertices and `L` of `k` into a fresh complex, keeping indices.
fn skeleton_of(k: &Complex2D) -> Complex2D {
    let mut out = Complex2D::new();
    for n in k.names() {
        out.vertex(n);
    }
    out.l_vertices = k.l_vertices.clone();
    out
}

/// Shared midpoints of non-`L` edges.
struct Midpoints {
    stem: &'static str,
    map: HashMap<(usize, usize), usize>,
}

impl Midpoints {
    fn get(&mut self, out: &mut Complex2D, a: usize, b: usize) -> usize {
        let e = edge(a, b);
        let stem = self.stem;
        *self
            .map
            .entry(e)
            .or_insert_with(|| out.fresh(&format!("{stem}{}", out.vertex_count())))
    }
}

fn finish_edges(k: &Complex2D, out: &mut Complex2D, mids: &mut Midpoints) -> Result<()> {
    let in_triangles: BTreeSet<(usize, usize)> = k.triangles.iter().flat_map(|&t| sides(t)).collect();
    for &(a, b) in k.edges.difference(&in_triangles) {
        if k.is_l_edge(a, b) {
            out.add_edge(a, b)?;
        } else {
            let m = mids.get(out, a, b);
            out.add_edge(a, m)?;
            out.add_edge(m, b)?;
        }
    }
    for &(a, b) in &k.l_edges {
        out.mark_l_edge(a, b)?;
    }
    Ok(())
}

/// Adds a midpoint to every edge outside `L` and a barycenter to every
/// triangle outside `L`, coning each such triangle off from its
/// barycenter.
pub fn partial_barycentric(k: &Complex2D) -> Complex2D {
    let mut out = skeleton_of(k);
    let mut mids = Midpoints {
        stem: "b",
        map: HashMap::new(),
    };
    let build = |out: &mut Complex2D, mids: &mut Midpoints| -> Result<()> {
        for &t in &k.triangles {
            if k.is_l_triangle(t) {
                out.add_triangle(t[0], t[1], t[2])?;
                continue;
            }
            let c = out.fresh(&format!("b{}", out.vertex_count()));
            for (x, y) in sides(t) {
                if k.is_l_edge(x, y) {
                    out.add_triangle(x, y, c)?;
                } else {
                    let m = mids.get(out, x, y);
                    out.add_triangle(x, m, c)?;
                    out.add_triangle(m, y, c)?;
                }
            }
        }
        finish_edges(k, out, mids)
    };
    build(&mut out, &mut mids).expect("subdividing a simplicial complex stays simplicial");
    out
}

/// Replaces each triangle outside `L` by a flag-no-square patch: pattern
/// (a) when it has no `L` edge, pattern (b) when it has one. Edges outside
/// `L` get one midpoint shared by the patches on either side.
///
/// Requires `k` to be flag with `L` full; [`partial_barycentric`] arranges
/// this.
pub fn fns_subdivide(k: &Complex2D) -> Result<Complex2D> {
    let l_count = |t: [usize; 3]| sides(t).iter().filter(|&&(a, b)| k.is_l_edge(a, b)).count();
    if let Some(t) = k.triangles.iter().find(|&&t| l_count(t) == 2) {
        return Err(Error::PatternMismatch(format!(
            "triangle {} {} {} meets L in two edges",
            k.name(t[0]),
            k.name(t[1]),
            k.name(t[2])
        )));
    }
    if !is_l_full(k) {
        return Err(Error::BadInput("L is not full".into()));
    }
    if !is_flag(k, &k.adjacency()) {
        return Err(Error::BadInput("complex is not flag".into()));
    }
    let mut out = skeleton_of(k);
    let mut mids = Midpoints {
        stem: "s",
        map: HashMap::new(),
    };
    for &t in &k.triangles {
        let l_sides: Vec<(usize, usize)> = sides(t).into_iter().filter(|&(a, b)| k.is_l_edge(a, b)).collect();
        match l_sides.len() {
            3 => {
                out.add_triangle(t[0], t[1], t[2])?;
            }
            0 => {
                let [a, b, c] = t;
                let mab = mids.get(&mut out, a, b);
                let mbc = mids.get(&mut out, b, c);
                let mac = mids.get(&mut out, a, c);
                let [p, r, s] = inner(&mut out);
                for (x, y, z) in [
                    (a, mab, p),
                    (a, p, mac),
                    (b, mab, r),
                    (b, r, mbc),
                    (c, mbc, s),
                    (c, s, mac),
                    (p, r, s),
                    (mab, p, r),
                    (mbc, r, s),
                    (mac, s, p),
                ] {
                    out.add_triangle(x, y, z)?;
                }
            }
            1 => {
                let (y, z) = l_sides[0];
                let x = t.into_iter().find(|&v| v != y && v != z).unwrap();
                let mxy = mids.get(&mut out, x, y);
                let mzx = mids.get(&mut out, z, x);
                let [yz, a, b, c, ab, bc, ca] = inner(&mut out);
                for (p, q, r) in [
                    (x, mxy, a),
                    (x, a, mzx),
                    (y, mxy, b),
                    (y, b, yz),
                    (z, yz, c),
                    (z, c, mzx),
                    (y, yz, z),
                    (a, mxy, ab),
                    (mxy, b, ab),
                    (b, yz, bc),
                    (yz, c, bc),
                    (c, mzx, ca),
                    (mzx, a, ca),
                    (a, ab, ca),
                    (b, ab, bc),
                    (c, bc, ca),
                    (ab, bc, ca),
                ] {
                    out.add_triangle(p, q, r)?;
                }
            }
            _ => unreachable!("checked above"),
        }
    }
    finish_edges(k, &mut out, &mut mids)?;
    Ok(out)
}

fn inner<const N: usize>(out: &mut Complex2D) -> [usize; N] {
    std::array::from_fn(|_| out.fresh(&format!("s{}", out.vertex_count())))
}

fn one_triangle(l_edge: bool) -> Complex2D {
    let mut k = Complex2D::new();
    let v: Vec<usize> = ["x", "y", "z"].iter().map(|n| k.vertex(n)).collect();
    k.add_triangle(v[0], v[1], v[2]).unwrap();
    if l_edge {
        k.mark_l_edge(v[1], v[2]).unwrap();
    }
    k
}

/// Pattern (a): one triangle subdivided with no `L` edge.
pub fn pattern_a() -> Complex2D {
    fns_subdivide(&one_triangle(false)).expect("a single triangle is flag")
}

/// Pattern (b): one triangle subdivided relative to the `L` edge `y z`.
pub fn pattern_b() -> Complex2D {
    fns_subdivide(&one_triangle(true)).expect("a single triangle is flag")
}
