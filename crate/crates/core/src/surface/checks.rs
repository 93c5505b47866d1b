use super::{sides, tri, Complex2D};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub euler_characteristic: i64,
    pub is_connected: bool,
    pub is_closed_surface: bool,
    pub is_orientable: bool,
    /// Genus of a connected closed orientable surface.
    pub genus: Option<usize>,
    pub is_flag: bool,
    pub has_induced_square: bool,
    /// Induced 4-cycle, if any, by vertex name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_witness: Option<[String; 4]>,
    pub l_full: bool,
}

pub fn surface_checks(k: &Complex2D) -> SurfaceReport {
    let adj = k.adjacency();
    let connected = is_connected(&adj);
    let closed = is_closed_surface(k);
    let orientable = closed && is_orientable(k);
    let chi = k.euler_characteristic();
    let genus = (connected && closed && orientable && chi <= 2 && chi % 2 == 0).then(|| ((2 - chi) / 2) as usize);
    let square = induced_square(&adj);
    SurfaceReport {
        vertices: k.vertex_count(),
        edges: k.edge_count(),
        triangles: k.triangle_count(),
        euler_characteristic: chi,
        is_connected: connected,
        is_closed_surface: closed,
        is_orientable: orientable,
        genus,
        is_flag: is_flag(k, &adj),
        has_induced_square: square.is_some(),
        square_witness: square.map(|s| s.map(|v| k.name(v).to_string())),
        l_full: is_l_full(k),
    }
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == adj.len()
}

/// Every edge in exactly two triangles and every vertex link a single cycle.
pub(super) fn is_closed_surface(k: &Complex2D) -> bool {
    let mut per_edge: HashMap<(usize, usize), usize> = HashMap::new();
    let mut link: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k.vertex_count()];
    for &t in k.triangles() {
        for e in sides(t) {
            *per_edge.entry(e).or_default() += 1;
        }
        link[t[0]].push((t[1], t[2]));
        link[t[1]].push((t[0], t[2]));
        link[t[2]].push((t[0], t[1]));
    }
    if k.edges().iter().any(|e| per_edge.get(e) != Some(&2)) {
        return false;
    }
    link.par_iter().all(|edges| is_single_cycle(edges))
}

fn is_single_cycle(edges: &[(usize, usize)]) -> bool {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if edges.len() < 3 || adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = edges[0].0;
    let (mut prev, mut cur, mut steps) = (start, adj[&start][0], 1);
    while cur != start {
        let next = if adj[&cur][0] == prev {
            adj[&cur][1]
        } else {
            adj[&cur][0]
        };
        prev = cur;
        cur = next;
        steps += 1;
    }
    steps == adj.len()
}

/// Coherent orientation by propagation across shared edges.
pub(super) fn is_orientable(k: &Complex2D) -> bool {
    let tris: Vec<[usize; 3]> = k.triangles().iter().copied().collect();
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, &t) in tris.iter().enumerate() {
        for e in sides(t) {
            by_edge.entry(e).or_default().push(i);
        }
    }
    // orientation as a cyclic vertex order; sign flips relative to sorted
    let mut orient: Vec<Option<[usize; 3]>> = vec![None; tris.len()];
    let directed = |o: [usize; 3]| [(o[0], o[1]), (o[1], o[2]), (o[2], o[0])];
    for s in 0..tris.len() {
        if orient[s].is_some() {
            continue;
        }
        orient[s] = Some(tris[s]);
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            let oi = orient[i].unwrap();
            for (a, b) in directed(oi) {
                for &j in &by_edge[&(a.min(b), a.max(b))] {
                    if j == i {
                        continue;
                    }
                    // neighbor must traverse the shared edge as b -> a
                    let t = tris[j];
                    let c = t.iter().copied().find(|&x| x != a && x != b).unwrap();
                    let want = [b, a, c];
                    match orient[j] {
                        None => {
                            orient[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(oj) => {
                            if !directed(oj).contains(&(b, a)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every 3-clique spans a triangle and there is no 4-clique.
pub(super) fn is_flag(k: &Complex2D, adj: &[Vec<usize>]) -> bool {
    let neigh: Vec<HashSet<usize>> = adj.iter().map(|n| n.iter().copied().collect()).collect();
    let triangles_ok = k.edges().par_iter().all(|&(a, b)| {
        adj[a]
            .iter()
            .filter(|c| neigh[b].contains(c))
            .all(|&c| k.triangles().contains(&tri(a, b, c)))
    });
    let no_k4 = k
        .triangles()
        .par_iter()
        .all(|&[a, b, c]| !adj[a].iter().any(|d| neigh[b].contains(d) && neigh[c].contains(d)));
    triangles_ok && no_k4
}

/// An induced 4-cycle `a - b - c - d` of the 1-skeleton, if one exists.
pub(super) fn induced_square(adj: &[Vec<usize>]) -> Option<[usize; 4]> {
    let neigh: Vec<HashSet<usize>> = adj.iter().map(|n| n.iter().copied().collect()).collect();
    (0..adj.len()).into_par_iter().find_map_first(|a| {
        // opposite corners c > a reached through middle vertices b
        let mut mids: HashMap<usize, Vec<usize>> = HashMap::new();
        for &b in &adj[a] {
            for &c in &adj[b] {
                if c > a && !neigh[a].contains(&c) {
                    mids.entry(c).or_default().push(b);
                }
            }
        }
        let mut cs: Vec<_> = mids.into_iter().collect();
        cs.sort_unstable();
        for (c, bs) in cs {
            for (i, &b) in bs.iter().enumerate() {
                if let Some(&d) = bs[i + 1..].iter().find(|&&d| !neigh[b].contains(&d)) {
                    return Some([a, b, c, d]);
                }
            }
        }
        None
    })
}

/// Every edge between two `L` vertices is an `L` edge.
pub(super) fn is_l_full(k: &Complex2D) -> bool {
    let l = k.l_vertices();
    k.edges()
        .iter()
        .all(|&(a, b)| !(l.contains(&a) && l.contains(&b)) || k.is_l_edge(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_tris(n: usize, tris: &[[usize; 3]]) -> Complex2D {
        let mut k = Complex2D::new();
        for i in 0..n {
            k.vertex(&i.to_string());
        }
        for &[a, b, c] in tris {
            k.add_triangle(a, b, c).unwrap();
        }
        k
    }

    fn tetrahedron() -> Complex2D {
        from_tris(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    }

    fn octahedron() -> Complex2D {
        // poles 0 and 5 over the equator 1-2-3-4
        let eq = [1, 2, 3, 4];
        let mut tris = Vec::new();
        for i in 0..4 {
            let (a, b) = (eq[i], eq[(i + 1) % 4]);
            tris.push([0, a, b]);
            tris.push([5, a, b]);
        }
        from_tris(6, &tris)
    }

    /// Brute-force induced 4-cycle search.
    fn brute_square(k: &Complex2D) -> bool {
        let n = k.vertex_count();
        let e = |a, b| k.has_edge(a, b);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let distinct = [a, b, c, d].iter().collect::<HashSet<_>>().len() == 4;
                        if distinct && e(a, b) && e(b, c) && e(c, d) && e(d, a) && !e(a, c) && !e(b, d) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn tetrahedron_boundary() {
        let r = surface_checks(&tetrahedron());
        assert!(r.is_closed_surface && r.is_orientable);
        assert_eq!(r.genus, Some(0));
        assert!(!r.is_flag);
        assert!(!r.has_induced_square);
    }

    #[test]
    fn octahedron_boundary() {
        let k = octahedron();
        let r = surface_checks(&k);
        assert!(r.is_closed_surface && r.is_orientable && r.is_flag);
        assert_eq!(r.genus, Some(0));
        assert!(r.has_induced_square);
        assert!(brute_square(&k));
    }

    #[test]
    fn torus() {
        // 7-vertex torus
        let mut tris = Vec::new();
        for i in 0..7 {
            tris.push([i, (i + 1) % 7, (i + 3) % 7]);
            tris.push([i, (i + 2) % 7, (i + 3) % 7]);
        }
        let r = surface_checks(&from_tris(7, &tris));
        assert!(r.is_closed_surface && r.is_orientable);
        assert_eq!(r.euler_characteristic, 0);
        assert_eq!(r.genus, Some(1));
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        // 6-vertex real projective plane
        let tris = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        let r = surface_checks(&from_tris(6, &tris));
        assert!(r.is_closed_surface);
        assert!(!r.is_orientable);
        assert_eq!(r.genus, None);
    }

    #[test]
    fn disc_is_not_closed() {
        let r = surface_checks(&from_tris(3, &[[0, 1, 2]]));
        assert!(!r.is_closed_surface);
    }

    #[test]
    fn square_search_matches_brute_force() {
        let cases = [
            tetrahedron(),
            octahedron(),
            from_tris(5, &[[0, 1, 2], [0, 2, 3], [0, 3, 4]]),
            from_tris(4, &[[0, 1, 2], [0, 2, 3]]),
        ];
        for k in cases {
            assert_eq!(induced_square(&k.adjacency()).is_some(), brute_square(&k));
        }
    }
}
