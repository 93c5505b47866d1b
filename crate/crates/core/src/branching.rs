//! Certified decision procedure for `(n, m)`-branching.
//!
//! A graph has `(n, m)`-branching when every vertex has valence at least
//! `n + 1` and, for every induced path `P = u .. v` of length 1 or 2 (taken
//! in both orientations) and every `n` distinct neighbors `u_i` of `u` off
//! `P`, there are cycles `H_i` of length `5..=m` through `u_i - u - P - v -
//! v_i`, pairwise meeting exactly in `P`, whose union is induced.
//!
//! The per-`(P, U)` search lists the induced cycles through each spine
//! `u_i - P` and backtracks for a family in which no two cycles touch
//! outside `P` (no shared vertex, no edge between them). An induced union
//! forces each `H_i` to be induced, so nothing is lost by searching only
//! induced cycles.

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use dashmap::DashMap;
use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Witness for one `(P, U)` instance. `cycles[i]` starts with the spine
/// `u_i, P..` and then follows the closing arc, so `v[i] = cycles[i][|P|+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub path: Vec<usize>,
    pub subset: Vec<usize>,
    pub v: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    ValenceTooLow,
    NoWitnessSystem,
}

/// A falsifying instance. For `ValenceTooLow` the path holds the offending
/// vertex alone and the subset is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingFailure {
    pub path: Vec<usize>,
    pub subset: Vec<usize>,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingCertificate {
    pub n: usize,
    pub m: usize,
    pub graph_sha256: String,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchingOutcome {
    Certified(BranchingCertificate),
    Failed(BranchingFailure),
}

impl BranchingOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, BranchingOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&BranchingCertificate> {
        match self {
            BranchingOutcome::Certified(c) => Some(c),
            BranchingOutcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&BranchingFailure> {
        match self {
            BranchingOutcome::Certified(_) => None,
            BranchingOutcome::Failed(f) => Some(f),
        }
    }
}

struct Candidate {
    seq: Vec<usize>,
    /// Cycle vertices not on `P`.
    outside: FixedBitSet,
    /// `outside` together with all its neighbors.
    closed: FixedBitSet,
}

type MemoKey = (Vec<usize>, Vec<usize>);

/// Memoized per-`(P, U)` witness search for a fixed graph and cycle bound.
/// Safe to share across threads; keys are the oriented path and the sorted
/// subset, so results do not depend on which thread asked first.
pub struct BranchingOracle<'g> {
    graph: &'g Graph,
    m: usize,
    memo: DashMap<MemoKey, Option<Arc<WitnessEntry>>>,
}

impl<'g> BranchingOracle<'g> {
    pub fn new(graph: &'g Graph, m: usize) -> Result<Self> {
        if m < 5 {
            return Err(Error::BadParams(format!("cycle bound m={m} must be at least 5")));
        }
        Ok(BranchingOracle {
            graph,
            m,
            memo: DashMap::new(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Witness for `(path, subset)` with cycles listed in `subset` order, or
    /// `None` if no witness system exists.
    pub fn witness(&self, path: &Path, subset: &[usize]) -> Result<Option<WitnessEntry>> {
        let g = self.graph;
        let u = path.first();
        let mut seen = FixedBitSet::with_capacity(g.vertex_count());
        for &x in subset {
            if x >= g.vertex_count() || !g.adjacent(u, x) || path.contains(x) || seen.put(x) {
                return Err(Error::BadSubset(format!(
                    "{x} is not a distinct neighbor of {u} off the path"
                )));
            }
        }
        if subset.is_empty() {
            return Err(Error::BadSubset("empty subset".into()));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let key = (path.vertices().to_vec(), sorted);
        let found = match self.memo.get(&key) {
            Some(hit) => hit.clone(),
            None => {
                let computed = search(g, path.vertices(), &key.1, self.m).map(Arc::new);
                self.memo.entry(key).or_insert(computed).clone()
            }
        };
        Ok(found.map(|w| reorder(&w, subset)))
    }
}

fn reorder(w: &WitnessEntry, subset: &[usize]) -> WitnessEntry {
    let mut out = WitnessEntry {
        path: w.path.clone(),
        subset: subset.to_vec(),
        v: Vec::with_capacity(subset.len()),
        cycles: Vec::with_capacity(subset.len()),
    };
    for &x in subset {
        let i = w.subset.iter().position(|&y| y == x).expect("same subset");
        out.v.push(w.v[i]);
        out.cycles.push(w.cycles[i].clone());
    }
    out
}

fn search(g: &Graph, path: &[usize], subset: &[usize], m: usize) -> Option<WitnessEntry> {
    let n = g.vertex_count();
    let candidates: Vec<Vec<Candidate>> = subset
        .iter()
        .map(|&ui| {
            let mut spine = vec![ui];
            spine.extend_from_slice(path);
            g.induced_cycle_extensions(&spine, m)
                .into_iter()
                .map(|seq| {
                    let mut outside = FixedBitSet::with_capacity(n);
                    for &x in &seq {
                        if !path.contains(&x) {
                            outside.insert(x);
                        }
                    }
                    let mut closed = outside.clone();
                    for x in outside.ones() {
                        closed.union_with(g.neighbor_set(x));
                    }
                    Candidate { seq, outside, closed }
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut chosen = Vec::with_capacity(subset.len());
    if !backtrack(&candidates, &mut chosen, &FixedBitSet::with_capacity(n)) {
        return None;
    }
    let cycles: Vec<Vec<usize>> = chosen
        .iter()
        .enumerate()
        .map(|(i, &c)| candidates[i][c].seq.clone())
        .collect();
    Some(WitnessEntry {
        path: path.to_vec(),
        subset: subset.to_vec(),
        v: cycles.iter().map(|c| c[path.len() + 1]).collect(),
        cycles,
    })
}

fn backtrack(cands: &[Vec<Candidate>], chosen: &mut Vec<usize>, forbidden: &FixedBitSet) -> bool {
    let i = chosen.len();
    if i == cands.len() {
        return true;
    }
    for (k, c) in cands[i].iter().enumerate() {
        if !c.outside.is_disjoint(forbidden) {
            continue;
        }
        let mut next = forbidden.clone();
        next.union_with(&c.closed);
        chosen.push(k);
        if backtrack(cands, chosen, &next) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// One-shot witness search without a shared memo.
pub fn witness_extension(g: &Graph, path: &Path, subset: &[usize], m: usize) -> Result<Option<WitnessEntry>> {
    BranchingOracle::new(g, m)?.witness(path, subset)
}

/// Every induced path of length 1 or 2 in both orientations: edges first,
/// then 2-paths, each group in lexicographic vertex order.
pub fn oriented_paths(g: &Graph) -> Vec<Path> {
    let mut ones = Vec::new();
    let mut twos = Vec::new();
    for u in 0..g.vertex_count() {
        for &w in g.neighbors(u) {
            ones.push(vec![u, w]);
            for &v in g.neighbors(w) {
                if v != u && !g.adjacent(u, v) {
                    twos.push(vec![u, w, v]);
                }
            }
        }
    }
    ones.sort();
    twos.sort();
    ones.into_iter().chain(twos).map(Path::trusted).collect()
}

/// `k`-subsets of `items` (already sorted) in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// All `(P, U)` instances quantified over by the definition, in canonical
/// order.
pub fn instances(g: &Graph, n: usize) -> Vec<(Path, Vec<usize>)> {
    let mut out = Vec::new();
    for p in oriented_paths(g) {
        let avail: Vec<usize> = g
            .neighbors(p.first())
            .iter()
            .copied()
            .filter(|&x| !p.contains(x))
            .collect();
        for u in combinations(&avail, n) {
            out.push((p.clone(), u));
        }
    }
    out
}

pub fn check_branching(g: &Graph, n: usize, m: usize) -> Result<BranchingOutcome> {
    check_branching_with(&BranchingOracle::new(g, m)?, n)
}

/// Runs the full check through a shared oracle. Instances are searched in
/// parallel; the reported failure is the first in canonical order.
pub fn check_branching_with(oracle: &BranchingOracle<'_>, n: usize) -> Result<BranchingOutcome> {
    let g = oracle.graph;
    if n == 0 {
        return Err(Error::BadParams("n must be at least 1".into()));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) < n + 1) {
        return Ok(BranchingOutcome::Failed(BranchingFailure {
            path: vec![v],
            subset: vec![],
            reason: FailureReason::ValenceTooLow,
        }));
    }
    let tasks = instances(g, n);
    let results: Vec<Option<WitnessEntry>> = tasks
        .par_iter()
        .map(|(p, u)| oracle.witness(p, u).expect("instances are well-formed"))
        .collect();
    let mut entries = Vec::with_capacity(results.len());
    for ((p, u), r) in tasks.into_iter().zip(results) {
        match r {
            Some(w) => entries.push(w),
            None => {
                return Ok(BranchingOutcome::Failed(BranchingFailure {
                    path: p.vertices().to_vec(),
                    subset: u,
                    reason: FailureReason::NoWitnessSystem,
                }))
            }
        }
    }
    Ok(BranchingOutcome::Certified(BranchingCertificate {
        n,
        m: oracle.m,
        graph_sha256: g.sha256(),
        entries,
    }))
}

/// Largest `n` with `(n, m)`-branching, 0 if none. Relies on monotonicity
/// in `n` and never exceeds the minimum valence minus one.
pub fn max_branching_n(g: &Graph, m: usize) -> Result<usize> {
    let oracle = BranchingOracle::new(g, m)?;
    if g.vertex_count() == 0 {
        return Ok(0);
    }
    let (min_deg, _) = g.valence_range();
    let mut hi = min_deg.saturating_sub(1);
    let mut lo = 0;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if check_branching_with(&oracle, mid)?.is_certified() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// Re-checks a certificate against the definition using only graph
/// predicates: valence, one entry per instance, and per entry the cycle
/// lengths, containment of `{u_i, v_i}` and `P`, pairwise intersections,
/// distinct `v_i` off `P`, and inducedness of the union.
pub fn validate_certificate(g: &Graph, cert: &BranchingCertificate) -> Result<()> {
    let bad = |msg: String| Err(Error::BadInput(msg));
    if cert.graph_sha256 != g.sha256() {
        return bad("certificate is for a different graph".into());
    }
    if cert.n == 0 || cert.m < 5 {
        return bad(format!("invalid parameters n={} m={}", cert.n, cert.m));
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) < cert.n + 1) {
        return bad(format!("vertex {} has valence below n+1", g.name(v)));
    }
    let expected = instances(g, cert.n);
    if expected.len() != cert.entries.len() {
        return bad(format!("{} entries, expected {}", cert.entries.len(), expected.len()));
    }
    for ((p, u), e) in expected.iter().zip(&cert.entries) {
        let here = format!("P={:?} U={:?}", g.labels_of(&e.path), g.labels_of(&e.subset));
        if e.path != p.vertices() || &e.subset != u {
            return bad(format!("entry {here} out of canonical order"));
        }
        if e.cycles.len() != cert.n || e.v.len() != cert.n {
            return bad(format!("{here}: wrong number of cycles"));
        }
        let v = p.last();
        let mut cycles = Vec::with_capacity(cert.n);
        for (i, seq) in e.cycles.iter().enumerate() {
            if seq.len() < 5 || seq.len() > cert.m {
                return bad(format!("{here}: cycle {i} has length {}", seq.len()));
            }
            if seq.iter().any(|&x| x >= g.vertex_count()) {
                return bad(format!("{here}: cycle {i} leaves the graph"));
            }
            let mut sorted = seq.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != seq.len() {
                return bad(format!("{here}: cycle {i} repeats a vertex"));
            }
            let c = crate::graph::Cycle::from_sequence(seq);
            if c.edges().any(|(a, b)| !g.adjacent(a, b)) {
                return bad(format!("{here}: cycle {i} uses a non-edge"));
            }
            if !c.contains_subpath(p.vertices()) || !c.contains(u[i]) || !c.contains(e.v[i]) {
                return bad(format!("{here}: cycle {i} misses u_i, v_i or P"));
            }
            if !g.adjacent(v, e.v[i]) || p.contains(e.v[i]) {
                return bad(format!("{here}: v_{i} is not a neighbor of v off P"));
            }
            cycles.push(c);
        }
        let mut vs = e.v.clone();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != e.v.len() {
            return bad(format!("{here}: v_i not distinct"));
        }
        if !g.is_induced_union_of_cycles(&cycles, p) {
            return bad(format!("{here}: union is not induced or intersections exceed P"));
        }
    }
    Ok(())
}

// ---- JSON ----

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(rename = "P")]
    p: Vec<String>,
    #[serde(rename = "U")]
    u: Vec<String>,
    v: Vec<String>,
    cycles: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    n: usize,
    m: usize,
    graph_sha256: String,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct FailureJson {
    #[serde(rename = "P")]
    p: Vec<String>,
    #[serde(rename = "U")]
    u: Vec<String>,
    reason: FailureReason,
}

impl BranchingCertificate {
    pub fn to_json(&self, g: &Graph) -> String {
        let doc = CertificateJson {
            n: self.n,
            m: self.m,
            graph_sha256: self.graph_sha256.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    p: g.labels_of(&e.path),
                    u: g.labels_of(&e.subset),
                    v: g.labels_of(&e.v),
                    cycles: e.cycles.iter().map(|c| g.labels_of(c)).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses a certificate written by [`to_json`](Self::to_json). Labels are
    /// resolved against `g`; the content is not validated.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let doc: CertificateJson = serde_json::from_str(text)?;
        let entries = doc
            .entries
            .iter()
            .map(|e| {
                Ok(WitnessEntry {
                    path: g.indices_of(&e.p)?,
                    subset: g.indices_of(&e.u)?,
                    v: g.indices_of(&e.v)?,
                    cycles: e.cycles.iter().map(|c| g.indices_of(c)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BranchingCertificate {
            n: doc.n,
            m: doc.m,
            graph_sha256: doc.graph_sha256,
            entries,
        })
    }
}

impl BranchingFailure {
    pub fn to_json(&self, g: &Graph) -> String {
        let doc = FailureJson {
            p: g.labels_of(&self.path),
            u: g.labels_of(&self.subset),
            reason: self.reason,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}
