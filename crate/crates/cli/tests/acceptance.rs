//! Acceptance gate. Every criterion runs in isolation, prints one PASS or
//! FAIL line, and the test fails if any criterion does.

use branchforge::bounds::{confdim_lower_branching, confdim_lower_mackay, genus_lower_bound, min_edges};
use branchforge::branching::{check_branching, instances, max_branching_n, BranchingCertificate, BranchingOracle};
use branchforge::geometries::{
    affine_levi, biaffine_levi, projective_levi, symplectic_gq_levi, transversal_design_levi,
};
use branchforge::graph::{Cycle, Graph, Path};
use branchforge::roundtree::{build_round_tree, default_base_path};
use branchforge::surface::{pattern_a, pattern_b, pontryagin_pipeline, Complex2D};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

/// Independent reading of the branching definition, written directly
/// against graph adjacency.
mod literal {
    use super::*;

    pub fn induced_paths(g: &Graph) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for a in 0..g.vertex_count() {
            for b in 0..g.vertex_count() {
                if g.adjacent(a, b) {
                    out.push(vec![a, b]);
                    for c in 0..g.vertex_count() {
                        if c != a && g.adjacent(b, c) && !g.adjacent(a, c) {
                            out.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            for mut rest in subsets(&items[i + 1..], k - 1) {
                rest.insert(0, x);
                out.push(rest);
            }
        }
        out
    }

    /// Every `(P, U)` pair the definition quantifies over, `U` sorted.
    pub fn all_instances(g: &Graph, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for p in induced_paths(g) {
            let lk: Vec<usize> = (0..g.vertex_count())
                .filter(|&x| g.adjacent(p[0], x) && !p.contains(&x))
                .collect();
            for u in subsets(&lk, n) {
                out.push((p.clone(), u));
            }
        }
        out
    }

    fn e(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    /// Checks one witness system against the bullets of the definition.
    pub fn check_system(
        g: &Graph,
        p: &[usize],
        u: &[usize],
        v: &[usize],
        cycles: &[Vec<usize>],
        m: usize,
    ) -> Result<(), String> {
        if cycles.len() != u.len() || v.len() != u.len() {
            return Err("wrong number of cycles".into());
        }
        let p_set: BTreeSet<usize> = p.iter().copied().collect();
        let p_edges: BTreeSet<(usize, usize)> = p.windows(2).map(|w| e(w[0], w[1])).collect();
        let end = *p.last().unwrap();
        let mut sets = Vec::new();
        for (i, c) in cycles.iter().enumerate() {
            let vs: BTreeSet<usize> = c.iter().copied().collect();
            if vs.len() != c.len() {
                return Err(format!("cycle {i} repeats a vertex"));
            }
            if c.len() < 5 || c.len() > m {
                return Err(format!("cycle {i} has length {}", c.len()));
            }
            let es: BTreeSet<(usize, usize)> = (0..c.len()).map(|j| e(c[j], c[(j + 1) % c.len()])).collect();
            if es.iter().any(|&(a, b)| !g.adjacent(a, b)) {
                return Err(format!("cycle {i} uses a non-edge"));
            }
            if !vs.contains(&u[i]) || !vs.contains(&v[i]) || !p_set.is_subset(&vs) || !p_edges.is_subset(&es) {
                return Err(format!("cycle {i} misses u_i, v_i or P"));
            }
            if !g.adjacent(end, v[i]) || p_set.contains(&v[i]) {
                return Err(format!("v_{i} is not in Lk(v) minus P"));
            }
            if !g.adjacent(p[0], u[i]) || p_set.contains(&u[i]) {
                return Err(format!("u_{i} is not in Lk(u) minus P"));
            }
            sets.push((vs, es));
        }
        if v.iter().collect::<BTreeSet<_>>().len() != v.len() {
            return Err("v_i not distinct".into());
        }
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let vi: BTreeSet<usize> = sets[i].0.intersection(&sets[j].0).copied().collect();
                let ei: BTreeSet<(usize, usize)> = sets[i].1.intersection(&sets[j].1).copied().collect();
                if vi != p_set || ei != p_edges {
                    return Err(format!("cycles {i} and {j} meet outside P"));
                }
            }
        }
        let union_v: BTreeSet<usize> = sets.iter().flat_map(|s| s.0.iter().copied()).collect();
        let union_e: BTreeSet<(usize, usize)> = sets.iter().flat_map(|s| s.1.iter().copied()).collect();
        for &a in &union_v {
            for &b in &union_v {
                if a < b && g.adjacent(a, b) && !union_e.contains(&(a, b)) {
                    return Err(format!("union is not induced at {a} {b}"));
                }
            }
        }
        Ok(())
    }

    /// Revalidates a certificate, including coverage of every instance.
    pub fn validate(g: &Graph, cert: &BranchingCertificate) -> Result<usize, String> {
        if let Some(x) = (0..g.vertex_count()).find(|&x| g.degree(x) < cert.n + 1) {
            return Err(format!("vertex {x} has valence below n+1"));
        }
        let mut by_key = HashMap::new();
        for entry in &cert.entries {
            let mut key = entry.subset.clone();
            key.sort_unstable();
            if by_key.insert((entry.path.clone(), key), entry).is_some() {
                return Err("duplicate entry".into());
            }
        }
        let all = all_instances(g, cert.n);
        if all.len() != by_key.len() {
            return Err(format!("{} instances but {} entries", all.len(), by_key.len()));
        }
        for (p, u) in &all {
            let entry = by_key
                .get(&(p.clone(), u.clone()))
                .ok_or(format!("no entry for P={p:?} U={u:?}"))?;
            check_system(g, p, &entry.subset, &entry.v, &entry.cycles, cert.m)?;
        }
        Ok(all.len())
    }
}

/// All-cycle-systems search on graphs with at most 12 vertices. Cycles are
/// vertex masks plus edge masks; no cycle is assumed induced.
mod brute {
    use super::*;

    pub struct Cycles {
        pub edge_index: Vec<Vec<usize>>,
        pub edge_ends: Vec<(usize, usize)>,
        pub list: Vec<(u32, u128)>,
    }

    pub fn cycles(g: &Graph, m: usize) -> Cycles {
        let n = g.vertex_count();
        assert!(n <= 12);
        let mut edge_index = vec![vec![usize::MAX; n]; n];
        let mut edge_ends = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if g.adjacent(a, b) {
                    edge_index[a][b] = edge_ends.len();
                    edge_index[b][a] = edge_ends.len();
                    edge_ends.push((a, b));
                }
            }
        }
        let mut list = Vec::new();
        fn dfs(
            g: &Graph,
            ei: &[Vec<usize>],
            m: usize,
            path: &mut Vec<usize>,
            mask: u32,
            edges: u128,
            out: &mut Vec<(u32, u128)>,
        ) {
            let s = path[0];
            let cur = *path.last().unwrap();
            if path.len() >= 5 && g.adjacent(cur, s) && path[1] < cur {
                out.push((mask, edges | 1u128 << ei[cur][s]));
            }
            if path.len() == m {
                return;
            }
            for w in s + 1..g.vertex_count() {
                if g.adjacent(cur, w) && mask >> w & 1 == 0 {
                    path.push(w);
                    dfs(g, ei, m, path, mask | 1 << w, edges | 1u128 << ei[cur][w], out);
                    path.pop();
                }
            }
        }
        for s in 0..n {
            dfs(g, &edge_index, m, &mut vec![s], 1 << s, 0, &mut list);
        }
        Cycles {
            edge_index,
            edge_ends,
            list,
        }
    }

    impl Cycles {
        fn spanned(&self, mask: u32) -> u128 {
            let mut out = 0;
            for (i, &(a, b)) in self.edge_ends.iter().enumerate() {
                if mask >> a & 1 == 1 && mask >> b & 1 == 1 {
                    out |= 1u128 << i;
                }
            }
            out
        }

        /// True iff some system of cycles satisfies the definition for `(p, u)`.
        pub fn has_system(&self, g: &Graph, p: &[usize], u: &[usize]) -> bool {
            let pmask: u32 = p.iter().map(|&x| 1u32 << x).sum();
            let pedges: u128 = p.windows(2).map(|w| 1u128 << self.edge_index[w[0]][w[1]]).sum();
            let end = *p.last().unwrap();
            let lk_v: u32 = (0..g.vertex_count())
                .filter(|&x| g.adjacent(end, x))
                .map(|x| 1u32 << x)
                .sum();
            let cands: Vec<Vec<(u32, u128)>> = u
                .iter()
                .map(|&ui| {
                    self.list
                        .iter()
                        .copied()
                        .filter(|&(vm, em)| {
                            vm & pmask == pmask && em & pedges == pedges && vm >> ui & 1 == 1 && vm & lk_v & !pmask != 0
                        })
                        .collect()
                })
                .collect();
            let mut chosen = Vec::new();
            self.search(&cands, pmask, pedges, &mut chosen)
        }

        fn search(&self, cands: &[Vec<(u32, u128)>], pmask: u32, pedges: u128, chosen: &mut Vec<(u32, u128)>) -> bool {
            let i = chosen.len();
            if i == cands.len() {
                let vm = chosen.iter().fold(0, |a, c| a | c.0);
                let em = chosen.iter().fold(0, |a, c| a | c.1);
                return self.spanned(vm) == em;
            }
            for &c in &cands[i] {
                let ok = chosen.iter().all(|d| c.0 & d.0 == pmask && c.1 & d.1 == pedges);
                if !ok {
                    continue;
                }
                let vm = chosen.iter().fold(c.0, |a, d| a | d.0);
                let em = chosen.iter().fold(c.1, |a, d| a | d.1);
                // sub-unions of an induced union are induced
                if self.spanned(vm) != em {
                    continue;
                }
                chosen.push(c);
                if self.search(cands, pmask, pedges, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
    }
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    Graph::from_edges(&names, edges).unwrap()
}

fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

fn random_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    graph(n, &edges)
}

fn cycle_with_chords(rng: &mut ChaCha8Rng, n: usize, chords: usize) -> Graph {
    let mut edges: BTreeSet<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    for _ in 0..chords {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    graph(n, &edges.into_iter().collect::<Vec<_>>())
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    graph(10, &edges)
}

/// Petersen graph with a few edges toggled.
fn perturbed_petersen(rng: &mut ChaCha8Rng) -> Graph {
    let mut edges: BTreeSet<(usize, usize)> = petersen().edges().collect();
    for _ in 0..rng.gen_range(0..3) {
        let a = rng.gen_range(0..10);
        let b = rng.gen_range(0..10);
        if a != b {
            let e = (a.min(b), a.max(b));
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
    }
    graph(10, &edges.into_iter().collect::<Vec<_>>())
}

/// Two hubs joined by internally disjoint paths.
fn theta(rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    let mut next = 2;
    for _ in 0..rng.gen_range(2..=4) {
        let len = rng.gen_range(2..=3);
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    graph(next, &edges)
}

fn random_small_graph(rng: &mut ChaCha8Rng) -> Graph {
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(5..=12);
            let p = rng.gen_range(0.15..0.35);
            random_gnp(rng, n, p)
        }
        1 => {
            let n = rng.gen_range(5..=12);
            let chords = rng.gen_range(0..=3);
            cycle_with_chords(rng, n, chords)
        }
        2 => perturbed_petersen(rng),
        _ => theta(rng),
    }
}

fn corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for q in [2, 3, 4] {
        out.push((format!("P{q}"), projective_levi(q).unwrap().graph));
    }
    for q in [2, 3, 4] {
        out.push((format!("A{q}"), affine_levi(q).unwrap().graph));
    }
    for q in [2, 3, 4] {
        out.push((format!("B{q}"), biaffine_levi(q).unwrap().graph));
    }
    out.push(("TD(3,3)".into(), transversal_design_levi(3, 3).unwrap().graph));
    out.push(("GQ2".into(), symplectic_gq_levi(2).unwrap().graph));
    out
}

fn criterion_1() -> String {
    let p2 = projective_levi(2).unwrap().graph;
    assert_eq!((p2.vertex_count(), p2.edge_count()), (14, 21));
    assert_eq!(p2.girth(), Some(6));
    assert_eq!(p2.diameter(), Some(3));
    assert_eq!(p2.valence_range(), (3, 3));

    // subdivided K4: 4 branch vertices of valence 3, and 6 valence-2
    // vertices whose neighbor pairs are the 6 pairs of branch vertices
    let a2 = affine_levi(2).unwrap().graph;
    assert_eq!((a2.vertex_count(), a2.edge_count()), (10, 12));
    let branch: Vec<usize> = (0..10).filter(|&v| a2.degree(v) == 3).collect();
    assert_eq!(branch.len(), 4);
    let mut pairs = BTreeSet::new();
    for v in (0..10).filter(|&v| a2.degree(v) == 2) {
        let nb = a2.neighbors(v);
        assert!(nb.iter().all(|w| branch.contains(w)));
        pairs.insert((nb[0].min(nb[1]), nb[0].max(nb[1])));
    }
    assert_eq!(pairs.len(), 6);

    let b2 = biaffine_levi(2).unwrap().graph;
    assert_eq!((b2.vertex_count(), b2.edge_count()), (8, 8));
    assert_eq!(b2.valence_range(), (2, 2));
    assert!(b2.is_connected());

    let b3 = biaffine_levi(3).unwrap().graph;
    assert_eq!(b3.vertex_count(), 18);
    assert_eq!(b3.girth(), Some(6));
    "P2 (14,21,g6,d3,3-reg), A2 subdivided K4, B2 8-cycle, B3 (18,g6)".into()
}

fn criterion_2() -> String {
    let mut lines = Vec::new();
    let table: [(&str, Graph, usize); 6] = [
        ("P2", projective_levi(2).unwrap().graph, 1),
        ("P3", projective_levi(3).unwrap().graph, 3),
        ("P4", projective_levi(4).unwrap().graph, 4),
        ("A3", affine_levi(3).unwrap().graph, 2),
        ("B3", biaffine_levi(3).unwrap().graph, 2),
        ("B4", biaffine_levi(4).unwrap().graph, 3),
    ];
    for (name, g, expect) in table {
        let start = Instant::now();
        let n = max_branching_n(&g, 6).unwrap();
        assert_eq!(n, expect, "{name}");
        let cert = check_branching(&g, n, 6).unwrap();
        let count = literal::validate(&g, cert.certificate().expect("certified at its maximum"))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!check_branching(&g, n + 1, 6).unwrap().is_certified(), "{name} at n+1");
        let t = start.elapsed();
        assert!(t < Duration::from_secs(300), "{name} took {t:?}");
        lines.push(format!("{name}={n} ({count} inst)"));
    }
    let gq = symplectic_gq_levi(2).unwrap().graph;
    let out = check_branching(&gq, 2, 8).unwrap();
    let count = literal::validate(&gq, out.certificate().expect("Tutte-Coxeter certifies (2,8)")).unwrap();
    lines.push(format!("GQ2 (2,8) ({count} inst)"));
    lines.join(", ")
}

fn criterion_3() -> String {
    let p2 = projective_levi(2).unwrap().graph;
    let out = check_branching(&p2, 2, 6).unwrap();
    let fail = out.failure().expect("P2 is not (2,6)-branching");
    assert_eq!(fail.path.len(), 2, "failure path should be a single edge");
    assert!(!out.is_certified());

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p2.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_branchforge"))
        .args(["gen", "projective", "-q", "2", "-o", file.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_branchforge"))
        .args(["check", "branching", "-n", "2", "-m", "6", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failure"]["P"].as_array().unwrap().len(), 2);
    format!(
        "failing P={:?} U={:?}, exit 1",
        p2.labels_of(&fail.path),
        p2.labels_of(&fail.subset)
    )
}

/// Checks the girth and inseparability consequences at each certified `(n, m)`
/// and returns the certified points found.
fn property_checks(name: &str, g: &Graph, ms: &[usize], violations: &mut Vec<String>) -> Vec<(usize, usize)> {
    let mut points = Vec::new();
    for &m in ms {
        let n = max_branching_n(g, m).unwrap();
        if n == 0 {
            continue;
        }
        if g.girth().is_some_and(|girth| girth < 5) {
            violations.push(format!("{name}: (1,{m}) but girth {:?}", g.girth()));
        }
        if n >= 2 && g.is_connected() && !g.is_inseparable().unwrap_or(false) {
            violations.push(format!("{name}: ({n},{m}) but separable"));
        }
        points.push((n, m));
    }
    points
}

fn criterion_4() -> String {
    let mut violations = Vec::new();
    let corpus = corpus();
    let mut points = Vec::new();
    for (name, g) in &corpus {
        for (n, m) in property_checks(name, g, &[6, 8], &mut violations) {
            if g.vertex_count() <= 30 {
                points.push((name.clone(), g.clone(), n, m));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bases: Vec<&(String, Graph)> = corpus.iter().filter(|(_, g)| g.vertex_count() <= 30).collect();
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 50 {
        attempts += 1;
        assert!(attempts < 2000, "only {accepted} random graphs certified");
        let (name, base) = bases.choose(&mut rng).unwrap();
        let mut edges = edge_list(base);
        for _ in 0..rng.gen_range(1..=5) {
            let i = rng.gen_range(0..edges.len());
            edges.swap_remove(i);
        }
        let g = Graph::from_edges(base.names(), &edges).unwrap();
        if !g.is_connected() || !check_branching(&g, 1, 6).unwrap().is_certified() {
            continue;
        }
        let label = format!("{name}-{}", base.edge_count() - edges.len());
        let found = property_checks(&label, &g, &[6], &mut violations);
        if accepted % 5 == 0 {
            points.extend(found.into_iter().map(|(n, m)| (label.clone(), g.clone(), n, m)));
        }
        accepted += 1;
    }

    let mut spot = 0;
    for (name, g, n, m) in points.iter().take(20) {
        let (n, m) = (*n, *m);
        assert!(check_branching(g, n, m).unwrap().is_certified(), "{name} ({n},{m})");
        if n > 1 && !check_branching(g, n - 1, m).unwrap().is_certified() {
            violations.push(format!("{name}: ({n},{m}) but not ({},{m})", n - 1));
        }
        if !check_branching(g, n, m + 1).unwrap().is_certified() {
            violations.push(format!("{name}: ({n},{m}) but not ({n},{})", m + 1));
        }
        spot += 1;
    }
    assert_eq!(spot, 20, "not enough certified points");
    assert!(violations.is_empty(), "{violations:?}");
    format!(
        "{} corpus + {accepted} random graphs ({attempts} drawn), {spot} monotonicity points, 0 violations",
        corpus.len()
    )
}

const DIGITS: u32 = 50;

/// ln(x) scaled by 10^DIGITS, from ln(x) = k ln 2 + 2 atanh((y-1)/(y+1)),
/// y = x / 2^k.
fn big_ln(x: u64) -> BigInt {
    let scale = BigInt::from(10u32).pow(DIGITS);
    let atanh2 = |p: BigInt, q: BigInt| {
        let (a, b) = (&p - &q, &p + &q);
        let mut term = &scale * &a / &b;
        let mut sum = BigInt::from(0);
        let mut j = 1u32;
        while term != BigInt::from(0) {
            sum += &term / j;
            term = term * &a * &a / (&b * &b);
            j += 2;
        }
        sum * 2
    };
    let k = 63 - x.leading_zeros();
    atanh2(BigInt::from(2), BigInt::from(1)) * k + atanh2(BigInt::from(x), BigInt::from(1u64) << k)
}

fn criterion_5() -> String {
    let scale = BigInt::from(10u32).pow(DIGITS);
    let ratio = big_ln(3) * &scale / big_ln(11);
    let digits = (scale + ratio).to_string();
    let oracle: f64 = format!("{}.{}", &digits[..1], &digits[1..]).parse().unwrap();
    let v = confdim_lower_branching(3, 6).unwrap();
    assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    assert_eq!(v, confdim_lower_mackay(3, 11).unwrap());
    let genus = genus_lower_bound(3, min_edges(3)).unwrap();
    assert!((genus - 2.7).abs() < 1e-12, "{genus}");
    format!("confdim(3,6)={v:.15} (oracle {oracle:.15}), genus bound {genus}")
}

fn criterion_6() -> String {
    let g = projective_levi(3).unwrap().graph;
    let oracle = BranchingOracle::new(&g, 6).unwrap();
    let cert = check_branching(&g, 3, 6).unwrap();
    literal::validate(&g, cert.certificate().unwrap()).unwrap();
    let stage = build_round_tree(&oracle, &default_base_path(&g, 2).unwrap(), 3, 3).unwrap();
    let report = stage.verify();
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    assert!(failed.is_empty(), "failed checks {failed:?}");
    assert!(report.check("outer_links").is_some_and(|c| c.passed));
    assert_eq!(report.sheets, 27);
    assert_eq!(report.horizontal_bound, 11);
    assert!(report.max_horizontal <= 11, "{}", report.max_horizontal);
    let iso = stage.sampled_isometry_check(200, 0);
    assert_eq!(iso.samples, 200);
    assert!(iso.discrepancies.is_empty(), "{:?}", iso.discrepancies.first());
    format!(
        "27 sheets, {} squares, {} checks pass, max horizontal {}, 200 samples clean",
        report.squares,
        report.checks.len(),
        report.max_horizontal
    )
}

/// Induced 4-cycle oracle: for every non-adjacent pair, their common
/// neighbors must be pairwise adjacent.
fn no_induced_square(adj: &[BTreeSet<usize>]) -> bool {
    for a in 0..adj.len() {
        let mut common: HashMap<usize, Vec<usize>> = HashMap::new();
        for &w in &adj[a] {
            for &b in &adj[w] {
                if b > a && !adj[a].contains(&b) {
                    common.entry(b).or_default().push(w);
                }
            }
        }
        for ws in common.values() {
            for i in 0..ws.len() {
                for j in i + 1..ws.len() {
                    if !adj[ws[i]].contains(&ws[j]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn adjacency_sets(k: &Complex2D) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); k.vertex_count()];
    for &(a, b) in k.edges() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// Closed orientable surface check from the triangle list alone: every edge
/// in two triangles, every vertex link one cycle, and a coherent orientation.
fn orientable_closed_genus(k: &Complex2D) -> Option<usize> {
    let tris: Vec<[usize; 3]> = k.triangles().iter().copied().collect();
    let mut on_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            on_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    if on_edge.len() != k.edge_count() || on_edge.values().any(|v| v.len() != 2) {
        return None;
    }
    let mut link: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k.vertex_count()];
    for t in &tris {
        for i in 0..3 {
            link[t[i]].push((t[(i + 1) % 3], t[(i + 2) % 3]));
        }
    }
    for l in &link {
        if l.is_empty() {
            return None;
        }
        let mut nb: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in l {
            nb.entry(a).or_default().push(b);
            nb.entry(b).or_default().push(a);
        }
        let start = l[0].0;
        let (mut prev, mut cur, mut steps) = (start, nb[&start][0], 1);
        while cur != start {
            let next = if nb[&cur][0] == prev { nb[&cur][1] } else { nb[&cur][0] };
            (prev, cur) = (cur, next);
            steps += 1;
        }
        if steps != nb.len() {
            return None;
        }
    }
    // orientation: +1 keeps the sorted order, -1 flips it
    let mut sign = vec![0i8; tris.len()];
    let dir = |t: &[usize; 3], s: i8, a: usize, b: usize| -> bool {
        let fwd = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])].contains(&(a, b));
        fwd == (s > 0)
    };
    for seed in 0..tris.len() {
        if sign[seed] != 0 {
            continue;
        }
        sign[seed] = 1;
        let mut stack = vec![seed];
        while let Some(i) = stack.pop() {
            let t = tris[i];
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                let j = *on_edge[&(a.min(b), a.max(b))].iter().find(|&&j| j != i).unwrap();
                // neighbors must traverse the shared edge in opposite directions
                let want = if dir(&t, sign[i], a, b) == dir(&tris[j], 1, a, b) {
                    -1
                } else {
                    1
                };
                if sign[j] == 0 {
                    sign[j] = want;
                    stack.push(j);
                } else if sign[j] != want {
                    return None;
                }
            }
        }
    }
    let chi = k.vertex_count() as i64 - k.edge_count() as i64 + tris.len() as i64;
    (chi <= 2 && chi % 2 == 0).then(|| ((2 - chi) / 2) as usize)
}

fn criterion_7() -> String {
    let mut lines = Vec::new();
    for q in [2, 3] {
        let start = Instant::now();
        let g = projective_levi(q).unwrap().graph;
        let out = pontryagin_pipeline(&g, None).unwrap();
        let r = &out.report;
        assert!(out.passed(), "P{q}: {r:?}");
        assert!(r.is_closed_surface && r.is_orientable && r.is_flag && r.l_full && !r.has_induced_square);
        assert!(out.edges_intact && out.graph_full);
        assert!(r.genus.is_some_and(|x| x >= 1));

        let k = &out.complex;
        let adj = adjacency_sets(k);
        assert!(no_induced_square(&adj), "P{q}: induced square");
        let genus = orientable_closed_genus(k).expect("closed orientable surface");
        assert_eq!(Some(genus), r.genus);
        assert!(genus >= 1);
        // flag: every 3-clique of the 1-skeleton is a triangle
        for &(a, b) in k.edges() {
            for &c in adj[a].intersection(&adj[b]) {
                if c > b {
                    assert!(k.triangles().contains(&[a, b, c]), "P{q}: empty triangle");
                }
            }
        }
        let idx: Vec<usize> = (0..g.vertex_count()).map(|v| k.index_of(g.name(v)).unwrap()).collect();
        for a in 0..g.vertex_count() {
            for b in a + 1..g.vertex_count() {
                assert_eq!(adj[idx[a]].contains(&idx[b]), g.adjacent(a, b), "P{q}: {a} {b}");
            }
        }
        let t = start.elapsed();
        assert!(t < Duration::from_secs(60), "P{q} took {t:?}");
        lines.push(format!("P{q}: genus {genus}, {} vertices", k.vertex_count()));
    }
    lines.join(", ")
}

fn criterion_8() -> String {
    let a = pattern_a();
    assert_eq!((a.vertex_count(), a.edge_count(), a.triangle_count()), (9, 18, 10));
    assert_eq!(
        a.vertex_count() as i64 - a.edge_count() as i64 + a.triangle_count() as i64,
        1
    );
    assert!(no_induced_square(&adjacency_sets(&a)));

    let b = pattern_b();
    assert_eq!((b.vertex_count(), b.edge_count(), b.triangle_count()), (12, 28, 17));
    assert_eq!(
        b.vertex_count() as i64 - b.edge_count() as i64 + b.triangle_count() as i64,
        1
    );
    assert!(no_induced_square(&adjacency_sets(&b)));
    let (x, y, z) = (
        b.index_of("x").unwrap(),
        b.index_of("y").unwrap(),
        b.index_of("z").unwrap(),
    );
    let adj = adjacency_sets(&b);
    assert!(adj[y].contains(&z));
    assert_eq!(b.edges().iter().filter(|&&e| e == (y.min(z), y.max(z))).count(), 1);
    assert_eq!(
        b.triangles()
            .iter()
            .filter(|t| t.contains(&y) && t.contains(&z))
            .count(),
        1
    );
    assert!(!adj[x].contains(&y) && !adj[x].contains(&z));
    "(9,18,10) and (12,28,17), chi 1, no induced square".into()
}

fn subset_cycles(g: &Graph, spine: &[usize], maxlen: usize) -> BTreeSet<Cycle> {
    let n = g.vertex_count();
    let nb: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&w| g.adjacent(v, w)).map(|w| 1u32 << w).sum())
        .collect();
    let spine_mask: u32 = spine.iter().map(|&v| 1u32 << v).sum();
    let mut out = BTreeSet::new();
    if spine.windows(2).any(|w| !g.adjacent(w[0], w[1])) {
        return out;
    }
    let rest = ((1u32 << n) - 1) & !spine_mask;
    let mut sub = rest;
    loop {
        let mask = sub | spine_mask;
        let size = mask.count_ones() as usize;
        if (5..=maxlen).contains(&size) && (0..n).all(|v| mask >> v & 1 == 0 || (nb[v] & mask).count_ones() == 2) {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let mut seq = vec![vs[0]];
            let mut prev = usize::MAX;
            loop {
                let cur = *seq.last().unwrap();
                let next = (0..n)
                    .find(|&w| nb[cur] >> w & 1 == 1 && mask >> w & 1 == 1 && w != prev)
                    .unwrap();
                if next == vs[0] {
                    break;
                }
                prev = cur;
                seq.push(next);
            }
            if seq.len() == size {
                let c = Cycle::from_sequence(&seq);
                if c.contains_subpath(spine) {
                    out.insert(c);
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn criterion_9() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut certified, mut failed, mut checked) = (0, 0, 0usize);
    for round in 0..500 {
        let g = random_small_graph(&mut rng);
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(5..=8);
        let all = brute::cycles(&g, m);
        let ours: BTreeSet<(Vec<usize>, Vec<usize>)> = literal::all_instances(&g, n).into_iter().collect();
        let lib: BTreeSet<(Vec<usize>, Vec<usize>)> = instances(&g, n)
            .into_iter()
            .map(|(p, u)| (p.vertices().to_vec(), u))
            .collect();
        assert_eq!(ours, lib, "round {round}: instance sets differ");
        let oracle = BranchingOracle::new(&g, m).unwrap();
        let mut every = (0..g.vertex_count()).all(|v| g.degree(v) > n);
        for (p, u) in &ours {
            let expect = all.has_system(&g, p, u);
            let got = oracle.witness(&Path::new(&g, p.clone()).unwrap(), u).unwrap();
            assert_eq!(
                got.is_some(),
                expect,
                "round {round}: n={n} m={m} P={p:?} U={u:?} edges={:?}",
                edge_list(&g)
            );
            if let Some(w) = got {
                literal::check_system(&g, p, &w.subset, &w.v, &w.cycles, m).unwrap();
            }
            every &= expect;
            checked += 1;
        }
        let outcome = check_branching(&g, n, m).unwrap();
        assert_eq!(outcome.is_certified(), every, "round {round}: verdicts differ");
        if every {
            certified += 1;
        } else {
            failed += 1;
        }
    }
    assert!(
        certified >= 20 && failed >= 20,
        "unbalanced sample: {certified} certified, {failed} failed"
    );

    let mut spines = 0;
    for _ in 0..60 {
        let n = rng.gen_range(8..=16);
        let g = if rng.gen_bool(0.5) {
            let p = rng.gen_range(0.15..0.3);
            random_gnp(&mut rng, n, p)
        } else {
            let chords = rng.gen_range(1..=5);
            cycle_with_chords(&mut rng, n, chords)
        };
        for _ in 0..4 {
            let len = rng.gen_range(2..=4);
            let mut spine = vec![rng.gen_range(0..n)];
            while spine.len() < len {
                let cur = *spine.last().unwrap();
                let options: Vec<usize> = if rng.gen_bool(0.9) {
                    g.neighbors(cur)
                        .iter()
                        .copied()
                        .filter(|w| !spine.contains(w))
                        .collect()
                } else {
                    (0..n).filter(|w| !spine.contains(w)).collect()
                };
                let Some(&w) = options.choose(&mut rng) else {
                    break;
                };
                spine.push(w);
            }
            let maxlen = rng.gen_range(5..=9);
            let lib: BTreeSet<Cycle> = g.induced_cycles_through(&spine, maxlen).into_iter().collect();
            let expect = if g.is_induced_path(&spine) {
                subset_cycles(&g, &spine, maxlen)
            } else {
                BTreeSet::new()
            };
            assert_eq!(lib, expect, "spine {spine:?} maxlen {maxlen} edges {:?}", edge_list(&g));
            spines += 1;
        }
    }
    format!("500 graphs ({certified} certified, {failed} failed, {checked} instances), {spines} spines agree")
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, fn() -> String);
    let criteria: [Criterion; 9] = [
        (1, "generator fingerprints", criterion_1),
        (2, "branching table", criterion_2),
        (3, "negative control", criterion_3),
        (4, "structural properties", criterion_4),
        (5, "bounds", criterion_5),
        (6, "round tree", criterion_6),
        (7, "surface pipeline", criterion_7),
        (8, "subdivision patterns", criterion_8),
        (9, "oracle equivalence", criterion_9),
    ];
    let budgets: BTreeMap<u32, Duration> = [(1, 1), (6, 120)]
        .into_iter()
        .map(|(k, s)| (k, Duration::from_secs(s)))
        .collect();
    let mut failures = Vec::new();
    for (k, name, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let t = start.elapsed();
        let verdict = match result {
            Ok(detail) if budgets.get(&k).is_some_and(|&b| t > b) => Err(format!("{detail}; over budget")),
            Ok(detail) => Ok(detail),
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default()),
        };
        match verdict {
            Ok(detail) => println!("PASS criterion {k} ({name}): {detail} [{:.2}s]", t.as_secs_f64()),
            Err(why) => {
                println!("FAIL criterion {k} ({name}): {why} [{:.2}s]", t.as_secs_f64());
                failures.push(k);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria {failures:?}");
}
