//! Metric `k`-diagrams: contraction of closed paths, exhaustive generation,
//! and lift counting.
//!
//! Internally a diagram is a ribbon structure on half-edges: `opp` pairs the
//! two ends of an edge and `sigma` sends the half-edge a circuit arrives on to
//! the one it leaves by. Vertices are the cycles of `sigma`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::PathStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// made of matched arrow pairs
    Path,
    /// joins an initial vertex of degree > 1 to a fresh leaf
    Stem,
    /// created while reducing a vertex of degree > 3
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub u: usize,
    pub v: usize,
    pub length: u64,
    pub kind: EdgeKind,
    /// traversals by each circuit
    pub c_p: Vec<u8>,
}

/// Vertices are numbered by first visit; circuit `p` starts at its leaf
/// and lists edges in traversal order. The first traversal of an edge runs
/// `u → v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricDiagram {
    pub vertices: usize,
    pub edges: Vec<DiagramEdge>,
    pub circuits: Vec<Vec<usize>>,
    /// vertex colors inherited from the path, `true` for white
    pub white: Vec<bool>,
}

pub type ShapeKey = Vec<Vec<usize>>;

impl MetricDiagram {
    pub fn k(&self) -> usize {
        self.circuits.len()
    }

    /// Number of transitions, from `|E| = 3s − k`.
    pub fn s(&self) -> usize {
        (self.edges.len() + self.k()) / 3
    }

    pub fn shape_key(&self) -> ShapeKey {
        self.circuits.clone()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn total_length(&self) -> u64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn roots(&self) -> Vec<usize> {
        self.circuits.iter().map(|c| self.edges[c[0]].u).collect()
    }

    pub fn has_stem(&self) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::Stem)
    }

    /// Every edge other than stems has positive length.
    pub fn positive_off_stems(&self) -> bool {
        self.edges.iter().all(|e| e.kind == EdgeKind::Stem || e.length > 0)
    }

    /// Strictly positive metric without any created edge.
    pub fn is_regular(&self) -> bool {
        self.edges.iter().all(|e| e.kind == EdgeKind::Path && e.length > 0)
    }

    /// 1-based `(p_−(e), p_+(e))`.
    pub fn circuit_range(&self, e: usize) -> (usize, usize) {
        let c = &self.edges[e].c_p;
        let lo = c.iter().position(|&x| x > 0).unwrap_or(0) + 1;
        let hi = c.len() - c.iter().rev().position(|&x| x > 0).unwrap_or(0);
        (lo, hi)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut c = self.vertices;
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                c -= 1;
            }
        }
        c
    }

    /// Genus of the closed surface obtained by gluing one disc per circuit.
    pub fn genus(&self) -> Result<usize> {
        let chi = self.vertices as i64 - self.edges.len() as i64 + self.k() as i64;
        let twice = 2 * self.components() as i64 - chi;
        if twice < 0 || twice % 2 != 0 {
            return Err(Error::Infeasible(format!("Euler characteristic {chi} is not that of a closed surface")));
        }
        Ok((twice / 2) as usize)
    }

    /// Checks the defining conditions of a `k`-diagram and the edge/vertex counts.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Infeasible(m));
        let k = self.k();
        if k == 0 || (self.edges.len() + k) % 3 != 0 {
            return bad(format!("{} edges do not fit 3s − k with k = {k}", self.edges.len()));
        }
        let s = self.s();
        if s == 0 || s % 2 != 0 {
            return bad(format!("odd or zero transition count {s}"));
        }
        if self.vertices != 2 * s {
            return bad(format!("{} vertices, expected {}", self.vertices, 2 * s));
        }
        let mut fwd = vec![0u8; self.edges.len()];
        let mut bwd = vec![0u8; self.edges.len()];
        let roots = self.roots();
        for (p, c) in self.circuits.iter().enumerate() {
            let mut cur = roots[p];
            for (j, &e) in c.iter().enumerate() {
                if j > 0 && c[j - 1] == e {
                    return bad(format!("circuit {} backtracks on edge {e}", p + 1));
                }
                let ed = &self.edges[e];
                if ed.u == ed.v {
                    return bad(format!("loop at vertex {}", ed.u));
                }
                cur = if cur == ed.u {
                    fwd[e] += 1;
                    ed.v
                } else if cur == ed.v {
                    bwd[e] += 1;
                    ed.u
                } else {
                    return bad(format!("circuit {} jumps onto edge {e}", p + 1));
                };
            }
            if cur != roots[p] {
                return bad(format!("circuit {} does not close", p + 1));
            }
        }
        if fwd.iter().chain(&bwd).any(|&x| x != 1) {
            return bad("some edge is not traversed once in each direction".into());
        }
        for (v, d) in self.degrees().into_iter().enumerate() {
            let want = if roots.contains(&v) { 1 } else { 3 };
            if d != want {
                return bad(format!("vertex {v} has degree {d}, expected {want}"));
            }
        }
        let g = self.genus()?;
        if k == 1 && s != 2 * g {
            return bad(format!("s = {s} but genus {g}"));
        }
        Ok(())
    }

    /// Edge lengths have the parity forced by the vertex colors.
    pub fn check_parity(&self) -> bool {
        self.edges.iter().all(|e| (e.length % 2 == 1) == (self.white[e.u] != self.white[e.v]))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: MetricDiagram = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }
}

/// Half-edge structure shared by contraction and generation.
#[derive(Clone, Debug, Default)]
struct Ribbon {
    opp: Vec<usize>,
    sigma: Vec<usize>,
    length: Vec<u64>,
    kind: Vec<EdgeKind>,
    white: Vec<bool>,
    alive: Vec<bool>,
    order: Vec<usize>,
    roots: Vec<usize>,
}

impl Ribbon {
    fn add_edge(&mut self, length: u64, kind: EdgeKind, white: (bool, bool), order: (usize, usize)) -> (usize, usize) {
        let a = self.opp.len();
        let b = a + 1;
        self.opp.extend([b, a]);
        self.sigma.extend([a, b]);
        self.length.extend([length, length]);
        self.kind.extend([kind, kind]);
        self.white.extend([white.0, white.1]);
        self.alive.extend([true, true]);
        self.order.extend([order.0, order.1]);
        (a, b)
    }

    fn cycle(&self, h: usize) -> Vec<usize> {
        let mut c = vec![h];
        let mut x = self.sigma[h];
        while x != h {
            c.push(x);
            x = self.sigma[x];
        }
        c
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.opp.len()];
        let mut out = Vec::new();
        for h in 0..self.opp.len() {
            if !self.alive[h] || seen[h] {
                continue;
            }
            let c = self.cycle(h);
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// Splits vertices of degree ≥ 4 with zero-length edges, earliest
    /// arrival first.
    fn reduce_degrees(&mut self) {
        loop {
            let target = self
                .cycles()
                .into_iter()
                .filter(|c| c.len() >= 4)
                .min_by_key(|c| c.iter().map(|&h| self.order[h]).min());
            let Some(c) = target else { return };
            let start = (0..c.len()).min_by_key(|&i| self.order[c[i]]).unwrap();
            let rot: Vec<usize> = (0..c.len()).map(|i| c[(start + i) % c.len()]).collect();
            let w = self.white[rot[0]];
            let (x, xb) = self.add_edge(0, EdgeKind::Split, (w, w), (usize::MAX, usize::MAX));
            let d = rot.len();
            self.sigma[rot[1]] = x;
            self.sigma[x] = rot[0];
            self.sigma[xb] = rot[2];
            self.sigma[rot[d - 1]] = xb;
        }
    }

    fn collapse_degree_two(&mut self) -> Result<()> {
        loop {
            let Some(c) = self.cycles().into_iter().find(|c| c.len() == 2) else { return Ok(()) };
            let (h1, h2) = (c[0], c[1]);
            let (o1, o2) = (self.opp[h1], self.opp[h2]);
            if o1 == h2 {
                return Err(Error::Infeasible("a closed loop of degree-2 vertices".into()));
            }
            let len = self.length[h1] + self.length[h2];
            let kind = if self.kind[h1] == EdgeKind::Path || self.kind[h2] == EdgeKind::Path {
                EdgeKind::Path
            } else {
                self.kind[h1]
            };
            self.opp[o1] = o2;
            self.opp[o2] = o1;
            for o in [o1, o2] {
                self.length[o] = len;
                self.kind[o] = kind;
            }
            self.alive[h1] = false;
            self.alive[h2] = false;
        }
    }

    /// Walks the circuits and numbers edges and vertices by first appearance.
    fn canonical(&self) -> Result<MetricDiagram> {
        let n = self.opp.len();
        let mut vertex_of = vec![usize::MAX; n];
        let mut vertex_white = Vec::new();
        let mut edge_of = vec![usize::MAX; n];
        let mut edges: Vec<DiagramEdge> = Vec::new();
        let mut departed = vec![false; n];
        let k = self.roots.len();
        let mut circuits = Vec::with_capacity(k);
        let name_vertex = |h: usize, vertex_of: &mut Vec<usize>, vertex_white: &mut Vec<bool>| {
            if vertex_of[h] == usize::MAX {
                let id = vertex_white.len();
                vertex_white.push(self.white[h]);
                for x in self.cycle(h) {
                    vertex_of[x] = id;
                }
            }
            vertex_of[h]
        };
        for (p, &root) in self.roots.iter().enumerate() {
            let mut circ = Vec::new();
            let mut h = root;
            loop {
                if departed[h] || !self.alive[h] {
                    return Err(Error::Infeasible("a half-edge is left twice".into()));
                }
                departed[h] = true;
                let a = self.opp[h];
                let tail = name_vertex(h, &mut vertex_of, &mut vertex_white);
                let head = name_vertex(a, &mut vertex_of, &mut vertex_white);
                if edge_of[h] == usize::MAX {
                    let id = edges.len();
                    edge_of[h] = id;
                    edge_of[a] = id;
                    edges.push(DiagramEdge { u: tail, v: head, length: self.length[h], kind: self.kind[h], c_p: vec![0; k] });
                }
                let e = edge_of[h];
                edges[e].c_p[p] += 1;
                circ.push(e);
                if a == self.roots[p] {
                    break;
                }
                h = self.sigma[a];
                if circ.len() > n {
                    return Err(Error::Infeasible("circuit does not return to its leaf".into()));
                }
            }
            circuits.push(circ);
        }
        if (0..n).any(|h| self.alive[h] && !departed[h]) {
            return Err(Error::Infeasible("part of the structure is never traversed".into()));
        }
        Ok(MetricDiagram { vertices: vertex_white.len(), edges, circuits, white: vertex_white })
    }
}

/// Contraction of a closed, non-backtracking `k`-tuple of paths.
///
/// Matched arrow pairs become unit-length edges. At every vertex the
/// circuits induce a permutation from arrival to departure half-edges; each
/// of its cycles becomes its own vertex. An initial vertex of degree > 1
/// receives a zero-length stem to a new leaf, cycles longer than three are
/// cut by zero-length edges, and degree-2 vertices are merged into lengths.
pub fn contract(path: &PathStructure) -> Result<MetricDiagram> {
    if !path.is_closed() {
        return Err(Error::Unmatched);
    }
    if !path.is_nonbacktracking() {
        return Err(Error::Association("path backtracks".into()));
    }
    for (p, r) in path.paths.iter().enumerate() {
        if r.is_empty() {
            return Err(Error::Association(format!("list {} is empty", p + 1)));
        }
        if path.end(p) != path.starts[p] {
            return Err(Error::Association(format!("path {} ends off its start", p + 1)));
        }
    }
    let arrows = &path.arrows;
    let mut rb = Ribbon::default();
    let mut dep = vec![0usize; arrows.len()];
    let mut arr = vec![0usize; arrows.len()];
    for (i, a) in arrows.iter().enumerate() {
        let j = a.partner.expect("closed path");
        if j < i {
            continue;
        }
        let (h, hb) = rb.add_edge(1, EdgeKind::Path, (a.from.is_white(), a.to.is_white()), (j, i));
        // the first arrow leaves by h and arrives on hb, its partner the reverse
        dep[i] = h;
        arr[i] = hb;
        dep[j] = hb;
        arr[j] = h;
    }
    // sigma is the identity on a fresh edge, so every assignment below is new
    for r in &path.paths {
        for q in r.start..r.end - 1 {
            rb.sigma[arr[q]] = dep[q + 1];
        }
    }
    for (p, r) in path.paths.iter().enumerate() {
        let (hs, he) = (dep[r.start], arr[r.end - 1]);
        rb.sigma[he] = hs;
        if hs == he {
            rb.roots.push(hs);
        } else {
            let w = path.starts[p].is_white();
            let (x, leaf) = rb.add_edge(0, EdgeKind::Stem, (w, w), (usize::MAX, 0));
            rb.sigma[he] = x;
            rb.sigma[x] = hs;
            rb.roots.push(leaf);
        }
    }
    // a vertex visited as a single pass-through of one arrow pair would be a
    // fixed point of sigma outside the leaves
    for h in 0..rb.opp.len() {
        if rb.sigma[h] == h && !rb.roots.contains(&h) {
            return Err(Error::Association("path backtracks".into()));
        }
    }
    rb.reduce_degrees();
    rb.collapse_degree_two()?;
    let d = rb.canonical()?;
    d.validate()?;
    Ok(d)
}

/// Largest `s` accepted by [`generate_diagrams`] for each `k`.
pub fn generation_cap(k: usize) -> usize {
    match k {
        1 | 2 => 6,
        3 => 4,
        _ => 0,
    }
}

struct Generator {
    k: usize,
    trivalent: usize,
    vert_ends: Vec<Vec<usize>>,
    he_vert: Vec<usize>,
    pair: Vec<Option<usize>>,
    used: Vec<bool>,
    circuits: Vec<Vec<usize>>,
    roots: Vec<usize>,
    made: usize,
    out: Vec<MetricDiagram>,
}

impl Generator {
    fn new_vertex(&mut self, deg: usize) -> usize {
        let v = self.vert_ends.len();
        let mut ends = Vec::with_capacity(deg);
        for _ in 0..deg {
            ends.push(self.he_vert.len());
            self.he_vert.push(v);
            self.pair.push(None);
            self.used.push(false);
        }
        self.vert_ends.push(ends);
        v
    }

    fn pop_vertex(&mut self) {
        let ends = self.vert_ends.pop().unwrap();
        for _ in ends {
            self.he_vert.pop();
            self.pair.pop();
            self.used.pop();
        }
    }

    fn rot(&self, h: usize) -> usize {
        let e = &self.vert_ends[self.he_vert[h]];
        let i = e.iter().position(|&x| x == h).unwrap();
        e[(i + 1) % e.len()]
    }

    fn depart(&mut self, h: usize, p: usize) {
        self.used[h] = true;
        self.circuits[p].push(h);
        match self.pair[h] {
            Some(g) => self.arrive(g, p),
            None => {
                if self.made < self.trivalent {
                    let v = self.new_vertex(3);
                    self.made += 1;
                    let g = self.vert_ends[v][0];
                    self.pair[h] = Some(g);
                    self.pair[g] = Some(h);
                    self.arrive(g, p);
                    self.pair[h] = None;
                    self.pop_vertex();
                    self.made -= 1;
                }
                for g in 0..self.he_vert.len() {
                    if self.pair[g].is_none() && g != h && self.vert_ends[self.he_vert[g]].len() == 3 {
                        self.pair[h] = Some(g);
                        self.pair[g] = Some(h);
                        self.arrive(g, p);
                        self.pair[h] = None;
                        self.pair[g] = None;
                    }
                }
            }
        }
        self.used[h] = false;
        self.circuits[p].pop();
    }

    fn arrive(&mut self, g: usize, p: usize) {
        let v = self.he_vert[g];
        if v == self.roots[p] {
            if p + 1 < self.k {
                let r = self.new_vertex(1);
                self.roots.push(r);
                self.circuits.push(Vec::new());
                let h = self.vert_ends[r][0];
                self.depart(h, p + 1);
                self.circuits.pop();
                self.roots.pop();
                self.pop_vertex();
            } else if self.made == self.trivalent && self.pair.iter().all(Option::is_some) && self.used.iter().all(|&u| u) {
                self.record();
            }
            return;
        }
        let d = self.rot(g);
        if !self.used[d] {
            self.depart(d, p);
        }
    }

    fn record(&mut self) {
        let mut rb = Ribbon::default();
        let n = self.he_vert.len();
        rb.opp = (0..n).map(|h| self.pair[h].unwrap()).collect();
        rb.sigma = (0..n).map(|h| self.rot(h)).collect();
        rb.length = vec![0; n];
        rb.kind = vec![EdgeKind::Path; n];
        rb.white = vec![false; n];
        rb.alive = vec![true; n];
        rb.order = vec![0; n];
        rb.roots = self.roots.iter().map(|&v| self.vert_ends[v][0]).collect();
        self.out.push(rb.canonical().expect("generator output is a diagram"));
    }
}

/// All `k`-diagrams with `s` transitions, sorted by shape key, each once.
pub fn generate_diagrams(s: usize, k: usize) -> Result<Vec<MetricDiagram>> {
    if s == 0 || s % 2 != 0 || k == 0 || s > generation_cap(k) || 2 * s < k {
        return Err(Error::OutOfRange(format!("diagram generation supports even s ≤ {} for k = {k}", generation_cap(k))));
    }
    let mut g = Generator {
        k,
        trivalent: 2 * s - k,
        vert_ends: Vec::new(),
        he_vert: Vec::new(),
        pair: Vec::new(),
        used: Vec::new(),
        circuits: vec![Vec::new()],
        roots: Vec::new(),
        made: 0,
        out: Vec::new(),
    };
    let r = g.new_vertex(1);
    g.roots.push(r);
    let h = g.vert_ends[r][0];
    g.depart(h, 0);
    let mut out = g.out;
    out.sort_by(|a, b| a.circuits.cmp(&b.circuits));
    let before = out.len();
    out.dedup_by(|a, b| a.circuits == b.circuits);
    if out.len() != before {
        return Err(Error::Infeasible("generator produced a diagram twice".into()));
    }
    Ok(out)
}

/// `D_k(s)`.
pub fn diagram_count(s: usize, k: usize) -> Result<usize> {
    Ok(generate_diagrams(s, k)?.len())
}

/// Independent enumeration: grow circuits edge by edge over abstract graphs
/// with degree constraints, without any rotation system.
pub fn brute_force_shapes(s: usize, k: usize) -> Result<BTreeSet<ShapeKey>> {
    if s == 0 || s % 2 != 0 || k == 0 || s > 4 || 2 * s < k {
        return Err(Error::OutOfRange("brute-force enumeration supports even s ≤ 4".into()));
    }
    struct St {
        s: usize,
        k: usize,
        deg: Vec<usize>,
        is_root: Vec<bool>,
        edges: Vec<(usize, usize)>,
        uses: Vec<u8>,
        circuits: Vec<Vec<usize>>,
        out: BTreeSet<ShapeKey>,
    }
    impl St {
        fn max_edges(&self) -> usize {
            3 * self.s - self.k
        }
        fn step(&mut self, cur: usize, last: Option<usize>, p: usize) {
            // return along a once-used edge
            for e in 0..self.edges.len() {
                if self.uses[e] != 1 || Some(e) == last || self.edges[e].1 != cur {
                    continue;
                }
                let to = self.edges[e].0;
                self.uses[e] = 2;
                self.circuits[p].push(e);
                self.arrive(to, e, p);
                self.circuits[p].pop();
                self.uses[e] = 1;
            }
            if self.edges.len() == self.max_edges() || self.deg[cur] >= 3 || self.is_root[cur] && self.deg[cur] >= 1 {
                return;
            }
            // fresh edge to a fresh vertex, then to every open vertex
            let mut targets: Vec<Option<usize>> = vec![None];
            targets.extend((0..self.deg.len()).filter(|&w| w != cur && !self.is_root[w] && self.deg[w] < 3).map(Some));
            for t in targets {
                let to = match t {
                    Some(w) => w,
                    None => {
                        if self.deg.len() == 2 * self.s {
                            continue;
                        }
                        self.deg.push(0);
                        self.is_root.push(false);
                        self.deg.len() - 1
                    }
                };
                let e = self.edges.len();
                self.edges.push((cur, to));
                self.uses.push(1);
                self.deg[cur] += 1;
                self.deg[to] += 1;
                self.circuits[p].push(e);
                self.arrive(to, e, p);
                self.circuits[p].pop();
                self.deg[cur] -= 1;
                self.deg[to] -= 1;
                self.uses.pop();
                self.edges.pop();
                if t.is_none() {
                    self.deg.pop();
                    self.is_root.pop();
                }
            }
        }
        fn arrive(&mut self, v: usize, e: usize, p: usize) {
            if self.is_root[v] {
                if p + 1 < self.k {
                    if self.deg.len() == 2 * self.s {
                        return;
                    }
                    self.deg.push(0);
                    self.is_root.push(true);
                    self.circuits.push(Vec::new());
                    let r = self.deg.len() - 1;
                    self.step(r, None, p + 1);
                    self.circuits.pop();
                    self.is_root.pop();
                    self.deg.pop();
                } else if self.deg.len() == 2 * self.s
                    && self.uses.iter().all(|&u| u == 2)
                    && self.deg.iter().zip(&self.is_root).all(|(&d, &r)| d == if r { 1 } else { 3 })
                {
                    self.out.insert(self.circuits.clone());
                }
                return;
            }
            self.step(v, Some(e), p);
        }
    }
    let mut st = St {
        s,
        k,
        deg: vec![0],
        is_root: vec![true],
        edges: Vec::new(),
        uses: Vec::new(),
        circuits: vec![Vec::new()],
        out: BTreeSet::new(),
    };
    st.step(0, None, 0);
    Ok(st.out)
}

/// Bounds on (and, for `k = 1` with positive metric off the stems, the exact
/// number of) lists contracting to `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftCount {
    pub upper: f64,
    pub lower: Option<f64>,
    pub exact: Option<u128>,
}

pub fn count_lifts(d: &MetricDiagram, n: usize, tbar: &[usize]) -> Result<LiftCount> {
    let k = d.k();
    if tbar.len() != k {
        return Err(Error::OutOfRange("one shift per circuit".into()));
    }
    let np: Vec<i64> = (0..k).map(|p| n as i64 - tbar[p] as i64 - p as i64).collect();
    if np.iter().any(|&x| x < 2) {
        return Err(Error::OutOfRange("special letters below 2".into()));
    }
    let n0 = *np.iter().min().unwrap();
    let total = d.total_length();
    if total % 2 != 0 {
        return Err(Error::Infeasible("odd total length".into()));
    }
    let m = (total / 2) as i64;
    let half_s = (d.s() / 2) as i64;
    let kappa: f64 = d.edges.iter().map(|e| e.length as f64 / 2.0 - e.length.div_ceil(2) as f64 + 1.0).sum();
    let pair_min = |e: usize, shift: i64| -> f64 {
        let (lo, hi) = d.circuit_range(e);
        (np[lo - 1] - shift).min(np[hi - 1] - shift) as f64
    };
    let powi = |base: f64, e: i64| base.powi(e as i32);
    let mut upper = powi((n0 - 1) as f64, -half_s) * ((n - 1) as f64).powf(kappa);
    for (i, e) in d.edges.iter().enumerate() {
        upper *= powi(pair_min(i, 1), e.length.div_ceil(2) as i64 - 1);
    }
    let positive = d.positive_off_stems();
    let lower = positive.then(|| {
        let shift = m - half_s;
        let base0 = (n0 - shift) as f64;
        if base0 <= 0.0 {
            return 0.0;
        }
        let mut v = powi((n - 1) as f64, -half_s) * base0.powf(kappa);
        for (i, e) in d.edges.iter().enumerate() {
            let b = pair_min(i, shift);
            if b <= 0.0 {
                return 0.0;
            }
            v *= powi(b, e.length.div_ceil(2) as i64 - 1);
        }
        v
    });
    let exact = (k == 1 && positive && tbar[0] == 0).then(|| {
        let free = m - half_s;
        (1..=free).map(|i| (n as i64 - i).max(0) as u128).product()
    });
    Ok(LiftCount { upper, lower, exact })
}

/// Groups contracted diagrams by metric, counting lists per class.
pub fn fibers<'a, I>(diagrams: I) -> BTreeMap<(ShapeKey, Vec<u64>), (MetricDiagram, u128)>
where
    I: IntoIterator<Item = &'a MetricDiagram>,
{
    let mut out: BTreeMap<(ShapeKey, Vec<u64>), (MetricDiagram, u128)> = BTreeMap::new();
    for d in diagrams {
        out.entry((d.shape_key(), d.lengths())).or_insert_with(|| (d.clone(), 0)).1 += 1;
    }
    out
}

/// Edge types `(c_1(e), …, c_k(e))` with multiplicities.
pub fn edge_type_histogram(d: &MetricDiagram) -> BTreeMap<Vec<u8>, usize> {
    let mut h = BTreeMap::new();
    for e in &d.edges {
        *h.entry(e.c_p.clone()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{associate_path, contract_lists, enumerate_sigma, SigmaVariant, TranspositionLists};

    fn single(n: usize, l: &[usize]) -> MetricDiagram {
        contract_lists(&TranspositionLists::single(n, l.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn coxeter_list_contracts_to_genus_one() {
        let d = single(5, &[1, 2, 3, 2, 4, 3, 2, 3, 4, 1]);
        assert_eq!((d.s(), d.edges.len(), d.vertices), (2, 5, 4));
        assert_eq!(d.genus().unwrap(), 1);
        assert_eq!(d.total_length(), 10);
        assert!(d.check_parity());
    }

    #[test]
    fn short_coxeter_relation() {
        let d = single(5, &[1, 2, 1, 2, 1, 2]);
        assert_eq!(d.s(), 2);
        assert!(d.positive_off_stems());
        assert!(d.has_stem());
        let lifts = count_lifts(&d, 5, &[0]).unwrap();
        assert_eq!(lifts.exact, Some(12));
        assert!(lifts.upper >= 12.0 && lifts.lower.unwrap() <= 12.0);
    }

    #[test]
    fn unmatched_paths_are_rejected() {
        let l = TranspositionLists::single(4, vec![1, 2]).unwrap();
        assert!(contract(&associate_path(&l).unwrap()).is_err());
    }

    #[test]
    fn small_diagram_counts() {
        assert_eq!(diagram_count(2, 1).unwrap(), 1);
        assert_eq!(diagram_count(4, 1).unwrap(), 105);
        assert_eq!(diagram_count(2, 2).unwrap(), 1);
        assert!(generate_diagrams(3, 1).is_err());
        assert!(generate_diagrams(8, 1).is_err());
    }

    #[test]
    fn generated_diagrams_are_valid() {
        for (s, k) in [(2, 1), (4, 1), (2, 2), (4, 2), (2, 3), (4, 3)] {
            for d in generate_diagrams(s, k).unwrap() {
                d.validate().unwrap();
                assert_eq!(d.edges.len(), 3 * s - k);
            }
        }
    }

    #[test]
    fn generator_matches_brute_force() {
        for (s, k) in [(2, 1), (4, 1), (2, 2), (4, 2), (2, 3)] {
            let g: BTreeSet<ShapeKey> = generate_diagrams(s, k).unwrap().iter().map(|d| d.shape_key()).collect();
            assert_eq!(g, brute_force_shapes(s, k).unwrap(), "s={s} k={k}");
        }
    }

    #[test]
    fn counting_bounds_hold() {
        let c = 10.0f64;
        for (s, k) in [(2usize, 1usize), (4, 1), (2, 2), (4, 2)] {
            let d = diagram_count(s, k).unwrap() as f64;
            let kf: f64 = (1..k).map(|x| x as f64).product();
            let sf = s as f64;
            assert!((sf / c).powf(sf) / kf <= d && d <= c.powf(sf - 1.0) * sf.powf(sf) / kf);
        }
    }

    #[test]
    fn json_round_trip() {
        let d = single(5, &[1, 2, 1, 2, 1, 2]);
        let back = MetricDiagram::from_json(&d.to_json().unwrap()).unwrap();
        assert_eq!(d, back);
        let v: serde_json::Value = serde_json::from_str(&d.to_json().unwrap()).unwrap();
        assert!(v.get("vertices").is_some() && v.get("edges").is_some() && v.get("circuits").is_some());
        assert!(v["edges"][0].get("c_p").is_some());
    }

    #[test]
    fn regular_members_have_parity_and_exact_counts() {
        for m in [6usize, 8] {
            let n = 6;
            let members = enumerate_sigma(&[m], &[0], n, SigmaVariant::Regular, true).unwrap().members.unwrap();
            let ds: Vec<MetricDiagram> = members.iter().map(|l| contract_lists(l).unwrap()).collect();
            assert!(ds.iter().all(|d| d.is_regular() && d.check_parity()));
            for ((_, _), (d, count)) in fibers(&ds) {
                assert_eq!(count_lifts(&d, n, &[0]).unwrap().exact, Some(count));
            }
        }
    }

    #[test]
    fn two_list_example_contracts() {
        let l = TranspositionLists::new(6, vec![0, 0], vec![vec![1, 2, 1], vec![2, 1, 2]]).unwrap();
        let d = contract_lists(&l).unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.edges.len(), 3 * d.s() - 2);
        assert!(d.check_parity());
    }
}
