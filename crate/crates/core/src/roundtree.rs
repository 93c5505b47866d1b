//! Combinatorial round trees inside the Davis complex of a right-angled
//! Coxeter group.
//!
//! Vertices of the Davis complex are [`NormalForm`]s; the edge from `g` to
//! `g*s` carries label `s`, and each edge `a ~ b` of the presentation graph
//! gives a square `{g, ga, gb, gab}` at every `g`. Nothing global is
//! materialized: a stage stores only the squares it has attached.
//!
//! A stage of depth `j` keeps a sheet record for every address of length at
//! most `j`. The root (address `[]`) holds the initial chain `A_0`; every
//! other sheet holds the strip attached to its parent's outer path. The disc
//! `D_t` is the union of the strips along the prefixes of `t`.

use crate::branching::BranchingOracle;
use crate::coxeter::{normal_form, NormalForm};
use crate::error::{Error, Result};
use crate::graph::{parse_word, Graph, Path};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

/// Square of the Davis complex named by its ShortLex-least corner and its
/// label pair `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub base: NormalForm,
    pub labels: (usize, usize),
}

impl Square {
    /// The square with corner `g` spanned by the commuting labels `a`, `b`.
    pub fn at(g: &Graph, corner: &NormalForm, a: usize, b: usize) -> Square {
        let labels = (a.min(b), a.max(b));
        let corners = corners_from(g, corner, labels);
        Square {
            base: corners.into_iter().min().expect("four corners"),
            labels,
        }
    }

    /// Corners in the order `base, base*a, base*b, base*a*b`.
    pub fn corners(&self, g: &Graph) -> [NormalForm; 4] {
        corners_from(g, &self.base, self.labels)
    }
}

fn corners_from(g: &Graph, x: &NormalForm, (a, b): (usize, usize)) -> [NormalForm; 4] {
    let xa = x.mul_letter(g, a);
    let xb = x.mul_letter(g, b);
    let xab = xa.mul_letter(g, b);
    [x.clone(), xa, xb, xab]
}

/// Label of the Davis-complex edge from `a` to `b`, if they are adjacent.
pub fn edge_label(g: &Graph, a: &NormalForm, b: &NormalForm) -> Option<usize> {
    let d = a.inverse(g).mul_word(g, b.letters());
    match d.letters() {
        [s] => Some(*s),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheet {
    /// Strip squares, or the squares of `A_0` at the root.
    pub squares: Vec<Square>,
    /// `L_t` from the basepoint outward; its last vertex starts `E_t`.
    pub left: Vec<NormalForm>,
    /// `E_t` from the `L` side to the `R` side.
    pub outer: Vec<NormalForm>,
    /// `R_t` from the basepoint outward; its last vertex ends `E_t`.
    pub right: Vec<NormalForm>,
}

/// Finite stage `A_j` of a round tree with vertical branching `n`.
#[derive(Clone, Debug)]
pub struct RoundTreeStage {
    graph: Graph,
    n: usize,
    m: usize,
    depth: usize,
    base_path: Vec<usize>,
    sheets: BTreeMap<Vec<usize>, Sheet>,
}

/// Squares with cached corners and a corner index.
struct Indexed {
    squares: Vec<Square>,
    corners: Vec<[NormalForm; 4]>,
    at: HashMap<NormalForm, Vec<usize>>,
}

impl Indexed {
    fn new<'a>(g: &Graph, squares: impl IntoIterator<Item = &'a Square>) -> Indexed {
        let mut out = Indexed {
            squares: Vec::new(),
            corners: Vec::new(),
            at: HashMap::new(),
        };
        let mut seen = HashSet::new();
        for sq in squares {
            if !seen.insert(sq.clone()) {
                continue;
            }
            let i = out.squares.len();
            let cs = sq.corners(g);
            for c in &cs {
                out.at.entry(c.clone()).or_default().push(i);
            }
            out.squares.push(sq.clone());
            out.corners.push(cs);
        }
        out
    }

    /// Label pairs of the squares at `v`, i.e. the edges of its link.
    fn link_edges(&self, v: &NormalForm) -> Vec<(usize, usize)> {
        self.at
            .get(v)
            .map(|ix| ix.iter().map(|&i| self.squares[i].labels).collect())
            .unwrap_or_default()
    }

    fn sides(&self, i: usize) -> [(NormalForm, NormalForm); 4] {
        let [x, xa, xb, xab] = &self.corners[i];
        [ordered(x, xa), ordered(x, xb), ordered(xa, xab), ordered(xb, xab)]
    }
}

fn ordered(a: &NormalForm, b: &NormalForm) -> (NormalForm, NormalForm) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Dotted 1-based address string; the root is `""`.
pub fn address_string(t: &[usize]) -> String {
    t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
}

fn parse_address(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split('.')
        .map(|p| match p.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i),
            _ => Err(Error::BadInput(format!("bad sheet address {s:?}"))),
        })
        .collect()
}

impl RoundTreeStage {
    /// `A_0`: the chain of squares at the identity labelled by consecutive
    /// edges of `path`.
    pub fn base(g: &Graph, path: &Path, n: usize, m: usize) -> Result<RoundTreeStage> {
        let girth = g.girth().unwrap_or(usize::MAX);
        if path.len() + 2 > girth {
            return Err(Error::BadPath(format!(
                "path length {} exceeds girth - 2 = {}",
                path.len(),
                girth.saturating_sub(2)
            )));
        }
        if n == 0 || m < 5 {
            return Err(Error::BadParams(format!("need n >= 1 and m >= 5, got n={n}, m={m}")));
        }
        let p = path.vertices();
        let e = NormalForm::identity();
        let letter = |s: usize| e.mul_letter(g, s);
        let squares = p.windows(2).map(|w| Square::at(g, &e, w[0], w[1])).collect();
        let mut outer = vec![letter(p[0])];
        for w in p.windows(2) {
            outer.push(e.mul_word(g, &[w[0], w[1]]));
            outer.push(letter(w[1]));
        }
        let root = Sheet {
            squares,
            left: vec![e.clone(), letter(p[0])],
            outer,
            right: vec![e.clone(), letter(*p.last().unwrap())],
        };
        Ok(RoundTreeStage {
            graph: g.clone(),
            n,
            m,
            depth: 0,
            base_path: p.to_vec(),
            sheets: BTreeMap::from([(vec![], root)]),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base_path(&self) -> &[usize] {
        &self.base_path
    }

    pub fn sheets(&self) -> &BTreeMap<Vec<usize>, Sheet> {
        &self.sheets
    }

    /// Mutable access, for building negative controls.
    pub fn sheets_mut(&mut self) -> &mut BTreeMap<Vec<usize>, Sheet> {
        &mut self.sheets
    }

    /// Addresses of length `depth`.
    pub fn leaves(&self) -> Vec<Vec<usize>> {
        self.sheets.keys().filter(|t| t.len() == self.depth).cloned().collect()
    }

    /// Squares of the disc `D_t`.
    pub fn disc_squares(&self, t: &[usize]) -> Vec<Square> {
        (0..=t.len())
            .filter_map(|k| self.sheets.get(&t[..k]))
            .flat_map(|s| s.squares.iter().cloned())
            .collect()
    }

    /// Squares of `A_d`: every strip of depth at most `d`.
    pub fn stage_squares(&self, d: usize) -> Vec<Square> {
        self.sheets
            .iter()
            .filter(|(t, _)| t.len() <= d)
            .flat_map(|(_, s)| s.squares.iter().cloned())
            .collect()
    }

    pub fn square_count(&self) -> usize {
        self.sheets.values().map(|s| s.squares.len()).sum()
    }

    /// Attaches `n` strips along the outer path of every leaf sheet.
    pub fn grow(&self, oracle: &BranchingOracle<'_>) -> Result<RoundTreeStage> {
        if oracle.graph().sha256() != self.graph.sha256() || oracle.m() != self.m {
            return Err(Error::BadParams("oracle does not match the stage".into()));
        }
        let leaves = self.leaves();
        let grown: Vec<Vec<Sheet>> = leaves
            .par_iter()
            .map(|t| self.strips_for(t, oracle))
            .collect::<Result<_>>()?;
        let mut next = self.clone();
        next.depth += 1;
        for (t, children) in leaves.into_iter().zip(grown) {
            for (i, child) in children.into_iter().enumerate() {
                let mut addr = t.clone();
                addr.push(i + 1);
                next.sheets.insert(addr, child);
            }
        }
        Ok(next)
    }

    fn strips_for(&self, t: &[usize], oracle: &BranchingOracle<'_>) -> Result<Vec<Sheet>> {
        let g = &self.graph;
        let sheet = &self.sheets[t];
        let disc = Indexed::new(g, self.disc_squares(t).iter());
        let ys = &sheet.outer;
        let r1 = ys.len() - 1;
        let here = |k: usize| format!("sheet {:?} vertex {k} of E", address_string(t));
        let label = |a: &NormalForm, b: &NormalForm, k: usize| {
            edge_label(g, a, b).ok_or_else(|| Error::ConvexityViolation(format!("{}: broken path", here(k))))
        };

        // first squares at y_0
        let l = &sheet.left;
        let u = label(&l[l.len() - 2], &l[l.len() - 1], 0)?;
        let v = label(&ys[0], &ys[1], 0)?;
        let vs: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&x| x != u)
            .take(self.n)
            .collect();
        if vs.len() < self.n {
            return Err(Error::OracleFailure(format!("{}: valence below n+1", here(0))));
        }
        let mut strips: Vec<Sheet> = vs
            .iter()
            .map(|&vi| {
                let mut left = sheet.left.clone();
                left.push(ys[0].mul_letter(g, vi));
                Sheet {
                    squares: vec![Square::at(g, &ys[0], v, vi)],
                    left,
                    outer: vec![ys[0].mul_letter(g, vi), ys[1].mul_letter(g, vi)],
                    right: sheet.right.clone(),
                }
            })
            .collect();
        let mut ends = vs;

        for k in 1..r1 {
            let yk = &ys[k];
            let uin = label(&ys[k - 1], yk, k)?;
            let vout = label(yk, &ys[k + 1], k)?;
            let link = disc.link_edges(yk);
            let has = |a: usize, b: usize| link.contains(&(a.min(b), a.max(b)));
            let pverts = if has(uin, vout) {
                vec![uin, vout]
            } else if let Some(w) = g.neighbors(uin).iter().copied().find(|&w| has(uin, w) && has(w, vout)) {
                vec![uin, w, vout]
            } else {
                return Err(Error::ConvexityViolation(format!(
                    "{}: link is not a short path",
                    here(k)
                )));
            };
            let p = Path::new(g, pverts).map_err(|e| Error::ConvexityViolation(format!("{}: {e}", here(k))))?;
            let wit = oracle
                .witness(&p, &ends)
                .map_err(|e| Error::OracleFailure(format!("{}: {e}", here(k))))?
                .ok_or_else(|| Error::OracleFailure(format!("{}: no witness system", here(k))))?;
            for (i, seq) in wit.cycles.iter().enumerate() {
                // arc u_i -> .. -> v_i' -> vout on the far side of P
                let pl = p.vertices().len();
                let mut arc = vec![seq[0]];
                arc.extend(seq[pl + 1..].iter().rev());
                arc.push(seq[pl]);
                let s = arc.len() - 1;
                let strip = &mut strips[i];
                for j in 0..s {
                    strip.squares.push(Square::at(g, yk, arc[j], arc[j + 1]));
                    strip.outer.push(yk.mul_word(g, &[arc[j], arc[j + 1]]));
                    if j + 1 < s {
                        strip.outer.push(yk.mul_letter(g, arc[j + 1]));
                    }
                }
                ends[i] = arc[s - 1];
            }
        }
        for (strip, &ui) in strips.iter_mut().zip(&ends) {
            strip.right.push(ys[r1].mul_letter(g, ui));
        }
        Ok(strips)
    }
}

/// ShortLex-least induced path of length `len` (1 or 2) starting at vertex 0.
pub fn default_base_path(g: &Graph, len: usize) -> Result<Path> {
    if g.vertex_count() == 0 {
        return Err(Error::BadPath("empty graph".into()));
    }
    let mut vs = vec![0];
    while vs.len() <= len {
        let last = *vs.last().unwrap();
        let next = g
            .neighbors(last)
            .iter()
            .copied()
            .find(|&w| !vs.contains(&w) && vs[..vs.len() - 1].iter().all(|&x| !g.adjacent(x, w)))
            .ok_or_else(|| Error::BadPath(format!("no induced path of length {len} from the first vertex")))?;
        vs.push(next);
    }
    Path::new(g, vs)
}

/// `A_0` on `path`, grown `depth` times.
pub fn build_round_tree(oracle: &BranchingOracle<'_>, path: &Path, n: usize, depth: usize) -> Result<RoundTreeStage> {
    let mut stage = RoundTreeStage::base(oracle.graph(), path, n, oracle.m())?;
    for _ in 0..depth {
        stage = stage.grow(oracle)?;
    }
    Ok(stage)
}

// ---- verification ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// First witness of a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub depth: usize,
    pub sheets: usize,
    pub squares: usize,
    /// Largest number of squares of one new strip meeting an older square.
    pub max_horizontal: usize,
    pub horizontal_bound: usize,
    /// Largest number of squares of a whole new layer meeting an older square.
    pub max_layer_contact: usize,
    pub checks: Vec<CheckResult>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, failures: impl IntoIterator<Item = String>) -> CheckResult {
    let witness = failures.into_iter().next();
    CheckResult {
        name: name.into(),
        passed: witness.is_none(),
        witness,
    }
}

/// Whether the link edges form a single path (`closed = false`) or a
/// single cycle (`closed = true`).
fn link_shape(edges: &[(usize, usize)]) -> Option<bool> {
    let mut deg: HashMap<usize, usize> = HashMap::new();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in edges {
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if edges.is_empty() || deg.values().any(|&d| d > 2) {
        return None;
    }
    let start = *deg.keys().next().unwrap();
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    if seen.len() != deg.len() {
        return None;
    }
    Some(edges.len() == deg.len())
}

impl RoundTreeStage {
    fn disc_failures(&self, t: &[usize]) -> Vec<String> {
        let g = &self.graph;
        let sheet = &self.sheets[t];
        let at = address_string(t);
        let d = Indexed::new(g, self.disc_squares(t).iter());
        let mut out = Vec::new();

        let mut edge_use: HashMap<(NormalForm, NormalForm), usize> = HashMap::new();
        for i in 0..d.squares.len() {
            for e in d.sides(i) {
                *edge_use.entry(e).or_default() += 1;
            }
        }
        let (v, e, f) = (d.at.len() as i64, edge_use.len() as i64, d.squares.len() as i64);
        if v - e + f != 1 {
            out.push(format!("sheet {at:?}: Euler characteristic {}", v - e + f));
        }

        let mut loop_vs: Vec<NormalForm> = sheet.left.clone();
        loop_vs.extend(sheet.outer.iter().skip(1).cloned());
        loop_vs.extend(sheet.right.iter().rev().skip(1).cloned());
        // loop_vs ends back at the basepoint
        let distinct: HashSet<&NormalForm> = loop_vs[..loop_vs.len() - 1].iter().collect();
        if distinct.len() != loop_vs.len() - 1 || loop_vs.first() != loop_vs.last() {
            out.push(format!("sheet {at:?}: L + E + R is not a simple closed loop"));
        }
        let loop_edges: HashSet<(NormalForm, NormalForm)> = loop_vs.windows(2).map(|w| ordered(&w[0], &w[1])).collect();
        let boundary: HashSet<(NormalForm, NormalForm)> = edge_use
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(e, _)| e.clone())
            .collect();
        if edge_use.values().any(|&c| c > 2) {
            out.push(format!("sheet {at:?}: an edge lies in three or more squares"));
        }
        if boundary != loop_edges {
            out.push(format!("sheet {at:?}: boundary differs from L + E + R"));
        }

        let on_loop: HashSet<&NormalForm> = loop_vs.iter().collect();
        let mut verts: Vec<&NormalForm> = d.at.keys().collect();
        verts.sort();
        for x in verts {
            match link_shape(&d.link_edges(x)) {
                Some(closed) if closed != on_loop.contains(x) => {}
                _ => {
                    out.push(format!("sheet {at:?}: link at {} is not a disc link", x.to_labels(g)));
                    break;
                }
            }
        }
        // connectivity through shared corners
        if !d.squares.is_empty() {
            let mut seen = vec![false; d.squares.len()];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(i) = queue.pop_front() {
                for c in &d.corners[i] {
                    for &j in &d.at[c] {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                out.push(format!("sheet {at:?}: disconnected"));
            }
        } else {
            out.push(format!("sheet {at:?}: empty"));
        }
        out
    }

    fn vertex_set(&self, squares: &[Square]) -> HashSet<NormalForm> {
        squares.iter().flat_map(|s| s.corners(&self.graph)).collect()
    }

    /// Runs every finite-stage check and the horizontal census.
    pub fn verify(&self) -> StageReport {
        let g = &self.graph;
        let addrs: Vec<&Vec<usize>> = self.sheets.keys().collect();
        let mut checks = Vec::new();

        let disc: Vec<String> = addrs.par_iter().flat_map(|t| self.disc_failures(t)).collect();
        checks.push(check("disc", disc));

        let mut sib = Vec::new();
        for t in addrs.iter().filter(|t| t.len() < self.depth) {
            let base: HashSet<Square> = self.disc_squares(t).into_iter().collect();
            let base_v = self.vertex_set(&base.iter().cloned().collect::<Vec<_>>());
            for i in 1..=self.n {
                for j in i + 1..=self.n {
                    let (mut a, mut b) = ((*t).clone(), (*t).clone());
                    a.push(i);
                    b.push(j);
                    let da: HashSet<Square> = self.disc_squares(&a).into_iter().collect();
                    let db: HashSet<Square> = self.disc_squares(&b).into_iter().collect();
                    let sq: HashSet<Square> = da.intersection(&db).cloned().collect();
                    let va = self.vertex_set(&da.into_iter().collect::<Vec<_>>());
                    let vb = self.vertex_set(&db.into_iter().collect::<Vec<_>>());
                    let vv: HashSet<NormalForm> = va.intersection(&vb).cloned().collect();
                    if sq != base || vv != base_v {
                        sib.push(format!(
                            "siblings {:?} and {:?} meet outside their parent",
                            address_string(&a),
                            address_string(&b)
                        ));
                    }
                }
            }
        }
        checks.push(check("sibling_intersection", sib));

        let mut links = Vec::new();
        for t in &addrs {
            let d = Indexed::new(g, self.disc_squares(t).iter());
            let ys = &self.sheets[*t].outer;
            for (k, y) in ys.iter().enumerate() {
                let edges = d.link_edges(y);
                let mut labels: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                labels.sort_unstable();
                labels.dedup();
                let is_path = link_shape(&edges) == Some(false) && g.is_induced_path(&path_order(&edges));
                let ok = is_path && (edges.len() == 1 || (edges.len() == 2 && k > 0));
                if !ok {
                    links.push(format!(
                        "sheet {:?}: link at E vertex {k} is not an induced 1- or 2-path",
                        address_string(t)
                    ));
                }
            }
        }
        checks.push(check("outer_links", links));

        let all = Indexed::new(g, self.stage_squares(self.depth).iter());
        let mut convex = Vec::new();
        let mut verts: Vec<&NormalForm> = all.at.keys().collect();
        verts.sort();
        for x in verts {
            let edges: HashSet<(usize, usize)> = all.link_edges(x).into_iter().collect();
            let mut labels: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            labels.sort_unstable();
            labels.dedup();
            'pairs: for (i, &a) in labels.iter().enumerate() {
                for &b in &labels[i + 1..] {
                    if g.adjacent(a, b) && !edges.contains(&(a, b)) {
                        convex.push(format!(
                            "link at {} misses the edge {}-{}",
                            x.to_labels(g),
                            g.name(a),
                            g.name(b)
                        ));
                        break 'pairs;
                    }
                }
            }
        }
        checks.push(check("local_convexity", convex));

        let x0 = NormalForm::identity();
        let touching: Vec<String> = self
            .sheets
            .iter()
            .filter(|(t, _)| !t.is_empty())
            .flat_map(|(t, s)| s.squares.iter().map(move |q| (t, q)))
            .filter(|(_, q)| q.corners(g).contains(&x0))
            .map(|(t, _)| format!("strip {:?} touches the basepoint", address_string(t)))
            .collect();
        checks.push(check("basepoint", touching));

        let mut novelty = Vec::new();
        let mut max_h = 0;
        let mut max_layer = 0;
        for level in 1..=self.depth {
            let older = self.stage_squares(level - 1);
            let older_set: HashSet<&Square> = older.iter().collect();
            let older_v = self.vertex_set(&older);
            let layer: Vec<(&Vec<usize>, &Sheet)> = self.sheets.iter().filter(|(t, _)| t.len() == level).collect();
            let mut owner: HashMap<NormalForm, &Vec<usize>> = HashMap::new();
            for (t, s) in &layer {
                let parent = &t[..t.len() - 1];
                let e_t: HashSet<NormalForm> = self.sheets[parent].outer.iter().cloned().collect();
                let sv = self.vertex_set(&s.squares);
                let meet: HashSet<NormalForm> = sv.intersection(&older_v).cloned().collect();
                if meet != e_t || s.squares.iter().any(|q| older_set.contains(q)) {
                    novelty.push(format!("strip {:?} meets A_{} outside E", address_string(t), level - 1));
                }
                for x in sv {
                    if e_t.contains(&x) {
                        continue;
                    }
                    if let Some(o) = owner.insert(x.clone(), t) {
                        novelty.push(format!(
                            "strips {:?} and {:?} share a new vertex",
                            address_string(o),
                            address_string(t)
                        ));
                    }
                }
            }
            let new_all = Indexed::new(g, layer.iter().flat_map(|(_, s)| s.squares.iter()));
            for (t, s) in &layer {
                let strip = Indexed::new(g, s.squares.iter());
                let parent = Indexed::new(g, self.disc_squares(&t[..t.len() - 1]).iter());
                for cs in &parent.corners {
                    let hit: HashSet<usize> = cs.iter().filter_map(|c| strip.at.get(c)).flatten().copied().collect();
                    max_h = max_h.max(hit.len());
                }
            }
            let older_ix = Indexed::new(g, older.iter());
            for cs in &older_ix.corners {
                let hit: HashSet<usize> = cs.iter().filter_map(|c| new_all.at.get(c)).flatten().copied().collect();
                max_layer = max_layer.max(hit.len());
            }
        }
        checks.push(check("strip_novelty", novelty));

        let leaves = self.leaves().len();
        let expect = self.n.pow(self.depth as u32);
        checks.push(check(
            "sheet_count",
            (leaves != expect).then(|| format!("{leaves} sheets at depth {}, expected {expect}", self.depth)),
        ));
        let bound = 3 * self.m - 7;
        checks.push(check(
            "horizontal_branching",
            (max_h > bound).then(|| format!("a square meets {max_h} squares of one strip")),
        ));
        checks.push(check(
            "layer_contact",
            (max_layer > self.n * bound).then(|| format!("a square meets {max_layer} new squares")),
        ));

        StageReport {
            depth: self.depth,
            sheets: leaves,
            squares: self.square_count(),
            max_horizontal: max_h,
            horizontal_bound: bound,
            max_layer_contact: max_layer,
            checks,
        }
    }
}

/// Orders the labels of a path-shaped link from one end to the other.
fn path_order(edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let Some(&start) = adj.iter().filter(|(_, n)| n.len() == 1).map(|(k, _)| k).min() else {
        return vec![];
    };
    let mut out = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[&cur].iter().find(|&&x| x != prev) {
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

// ---- isometry sampling ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub x: String,
    pub y: String,
    pub skeleton: usize,
    pub word: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub samples: usize,
    pub seed: u64,
    pub discrepancies: Vec<Discrepancy>,
}

impl RoundTreeStage {
    /// Compares stage 1-skeleton distance with word distance on `samples`
    /// random vertex pairs.
    pub fn sampled_isometry_check(&self, samples: usize, seed: u64) -> IsometryReport {
        let g = &self.graph;
        let all = Indexed::new(g, self.stage_squares(self.depth).iter());
        let mut verts: Vec<NormalForm> = all.at.keys().cloned().collect();
        verts.sort();
        let id: HashMap<&NormalForm, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for i in 0..all.squares.len() {
            for (a, b) in all.sides(i) {
                let (a, b) = (id[&a], id[&b]);
                if !adj[a].contains(&b) {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..samples)
            .map(|_| (rng.gen_range(0..verts.len()), rng.gen_range(0..verts.len())))
            .collect();
        let discrepancies = pairs
            .par_iter()
            .filter_map(|&(x, y)| {
                let mut dist = vec![usize::MAX; verts.len()];
                dist[x] = 0;
                let mut queue = VecDeque::from([x]);
                while let Some(a) = queue.pop_front() {
                    if a == y {
                        break;
                    }
                    for &b in &adj[a] {
                        if dist[b] == usize::MAX {
                            dist[b] = dist[a] + 1;
                            queue.push_back(b);
                        }
                    }
                }
                let word = crate::coxeter::nf_distance(g, &verts[x], &verts[y]);
                (dist[y] != word).then(|| Discrepancy {
                    x: verts[x].to_labels(g),
                    y: verts[y].to_labels(g),
                    skeleton: dist[y],
                    word,
                })
            })
            .collect();
        IsometryReport {
            samples,
            seed,
            discrepancies,
        }
    }
}

// ---- JSON ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareJson {
    base: String,
    labels: [String; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SheetJson {
    squares: Vec<SquareJson>,
    #[serde(rename = "L")]
    left: Vec<String>,
    #[serde(rename = "E")]
    outer: Vec<String>,
    #[serde(rename = "R")]
    right: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageJson {
    n: usize,
    m: usize,
    depth: usize,
    graph_sha256: String,
    path: Vec<String>,
    sheets: BTreeMap<String, SheetJson>,
}

impl RoundTreeStage {
    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let words = |vs: &[NormalForm]| vs.iter().map(|v| v.to_labels(g)).collect();
        let doc = StageJson {
            n: self.n,
            m: self.m,
            depth: self.depth,
            graph_sha256: g.sha256(),
            path: g.labels_of(&self.base_path),
            sheets: self
                .sheets
                .iter()
                .map(|(t, s)| {
                    let sj = SheetJson {
                        squares: s
                            .squares
                            .iter()
                            .map(|q| SquareJson {
                                base: q.base.to_labels(g),
                                labels: [g.name(q.labels.0).into(), g.name(q.labels.1).into()],
                            })
                            .collect(),
                        left: words(&s.left),
                        outer: words(&s.outer),
                        right: words(&s.right),
                    };
                    (address_string(t), sj)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Loads a stage written by [`to_json`](Self::to_json). Words are
    /// reduced to normal form and squares re-normalized; run
    /// [`verify`](Self::verify) to check the structure.
    pub fn from_json(g: &Graph, text: &str) -> Result<RoundTreeStage> {
        let doc: StageJson = serde_json::from_str(text)?;
        if doc.graph_sha256 != g.sha256() {
            return Err(Error::BadInput("stage was built on a different graph".into()));
        }
        if doc.n == 0 || doc.m < 5 {
            return Err(Error::BadParams(format!("n={} m={}", doc.n, doc.m)));
        }
        let word = |s: &str| normal_form(g, &parse_word(g, s)?);
        let words = |vs: &[String]| vs.iter().map(|s| word(s)).collect::<Result<Vec<_>>>();
        let base_path = g.indices_of(&doc.path)?;
        Path::new(g, base_path.clone())?;
        let mut sheets = BTreeMap::new();
        for (addr, s) in &doc.sheets {
            let t = parse_address(addr)?;
            if t.len() > doc.depth || t.iter().any(|&i| i > doc.n) {
                return Err(Error::BadInput(format!("sheet address {addr:?} out of range")));
            }
            let squares = s
                .squares
                .iter()
                .map(|q| {
                    let base = word(&q.base)?;
                    let ab = g.indices_of(&q.labels)?;
                    if !g.adjacent(ab[0], ab[1]) {
                        return Err(Error::BadInput(format!("square labels {:?} do not commute", q.labels)));
                    }
                    Ok(Square::at(g, &base, ab[0], ab[1]))
                })
                .collect::<Result<Vec<_>>>()?;
            let left = words(&s.left)?;
            let outer = words(&s.outer)?;
            let right = words(&s.right)?;
            if left.len() < 2 || outer.len() < 2 || right.len() < 2 {
                return Err(Error::BadInput(format!(
                    "sheet {addr:?} has a degenerate boundary path"
                )));
            }
            sheets.insert(
                t,
                Sheet {
                    squares,
                    left,
                    outer,
                    right,
                },
            );
        }
        if !sheets.contains_key(&vec![]) {
            return Err(Error::BadInput("missing root sheet".into()));
        }
        for t in sheets.keys() {
            if !t.is_empty() && !sheets.contains_key(&t[..t.len() - 1]) {
                return Err(Error::BadInput(format!("sheet {:?} has no parent", address_string(t))));
            }
        }
        Ok(RoundTreeStage {
            graph: g.clone(),
            n: doc.n,
            m: doc.m,
            depth: doc.depth,
            base_path,
            sheets,
        })
    }
}
