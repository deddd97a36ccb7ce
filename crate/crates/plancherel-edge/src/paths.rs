//! Lists of star transpositions, the paths attached to them, and the
//! `Σ`, `Σ′`, `Σ★` collections.
//!
//! A `k`-tuple of lists uses special letters `s_p = n − t_p − p + 1`; list `p`
//! holds letters in `1..s_p` and stands for `(a_1 s_p)(a_2 s_p)⋯`. The path of
//! a list lives on vertices `i(w)`, `i(b)`: every letter draws an arrow into
//! `a(b)` and then leaves `a(b)` either towards `a(w)` or back along the one
//! unmatched arrow entering `a(b)`. Arrows drawn against an unmatched arrow
//! of the opposite direction cancel it.

use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::diagrams::{self, MetricDiagram};
use crate::error::{Error, Result};
use crate::group_algebra::Permutation;

/// Hard limits for exhaustive enumeration.
pub const SIGMA_MAX_N: usize = 8;
pub const SIGMA_MAX_LETTERS: usize = 12;
/// Largest number of words materialized when members are requested.
pub const SIGMA_MEMBER_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TranspositionLists {
    n: usize,
    shifts: Vec<usize>,
    lists: Vec<Vec<usize>>,
}

impl TranspositionLists {
    pub fn new(n: usize, shifts: Vec<usize>, lists: Vec<Vec<usize>>) -> Result<Self> {
        if shifts.len() != lists.len() || lists.is_empty() {
            return Err(Error::OutOfRange("one shift per list, at least one list".into()));
        }
        if n > u8::MAX as usize {
            return Err(Error::OutOfRange(format!("n = {n} too large for path bookkeeping")));
        }
        for (p, (&t, l)) in shifts.iter().zip(&lists).enumerate() {
            let s = n
                .checked_sub(t + p)
                .filter(|&s| s >= 2)
                .ok_or_else(|| Error::OutOfRange(format!("special letter of list {} below 2", p + 1)))?;
            if let Some(&a) = l.iter().find(|&&a| a == 0 || a >= s) {
                return Err(Error::OutOfRange(format!("letter {a} outside 1..{s} in list {}", p + 1)));
            }
        }
        Ok(TranspositionLists { n, shifts, lists })
    }

    /// Single list with shift 0.
    pub fn single(n: usize, list: Vec<usize>) -> Result<Self> {
        Self::new(n, vec![0], vec![list])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.lists.len()
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    /// `s_p` for 0-based `p`.
    pub fn special(&self, p: usize) -> usize {
        self.n - self.shifts[p] - p
    }

    pub fn specials(&self) -> Vec<usize> {
        (0..self.k()).map(|p| self.special(p)).collect()
    }

    fn list_product(&self, p: usize, acc: &mut Permutation) {
        let s = self.special(p);
        for &a in &self.lists[p] {
            *acc = acc.compose(&Permutation::transposition(self.n, a, s));
        }
    }

    /// `σ(ℓ^1)⋯σ(ℓ^k)`.
    pub fn product(&self) -> Permutation {
        let mut acc = Permutation::identity(self.n);
        for p in 0..self.k() {
            self.list_product(p, &mut acc);
        }
        acc
    }

    pub fn has_decreasing_specials(&self) -> bool {
        (1..self.k()).all(|p| self.special(p) < self.special(p - 1))
    }

    /// Every path can start on its own special vertex: the special letters
    /// decrease strictly and `σ(ℓ^1)⋯σ(ℓ^{p−1})` fixes `s_p` for each `p ≥ 2`.
    pub fn is_admissible(&self) -> bool {
        if !self.has_decreasing_specials() {
            return false;
        }
        let mut acc = Permutation::identity(self.n);
        for p in 0..self.k() {
            let s = self.special(p);
            if acc.0[s - 1] as usize != s - 1 {
                return false;
            }
            self.list_product(p, &mut acc);
        }
        true
    }

    pub fn has_adjacent_repeat(&self) -> bool {
        self.lists.iter().any(|l| l.windows(2).any(|w| w[0] == w[1]))
    }

    pub fn total_letters(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    White(usize),
    Black(usize),
}

impl Vertex {
    pub fn letter(self) -> usize {
        match self {
            Vertex::White(i) | Vertex::Black(i) => i,
        }
    }

    pub fn is_white(self) -> bool {
        matches!(self, Vertex::White(_))
    }

    fn slot(self) -> usize {
        match self {
            Vertex::White(i) => 2 * i,
            Vertex::Black(i) => 2 * i + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub from: Vertex,
    pub to: Vertex,
    pub partner: Option<usize>,
    /// 0-based list index and 0-based letter position that drew the arrow.
    pub list: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStructure {
    pub arrows: Vec<Arrow>,
    pub paths: Vec<Range<usize>>,
    pub starts: Vec<Vertex>,
}

/// A connected piece of the unmatched part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnmatchedComponent {
    Cycle(Vec<Vertex>),
    Thread(Vec<Vertex>),
}

impl UnmatchedComponent {
    pub fn letters(&self) -> Vec<usize> {
        let vs = match self {
            UnmatchedComponent::Cycle(v) | UnmatchedComponent::Thread(v) => v,
        };
        let mut l: Vec<usize> = vs.iter().map(|v| v.letter()).collect();
        l.sort_unstable();
        l.dedup();
        l
    }
}

impl PathStructure {
    pub fn is_closed(&self) -> bool {
        self.arrows.iter().all(|a| a.partner.is_some())
    }

    pub fn end(&self, p: usize) -> Vertex {
        let r = &self.paths[p];
        if r.is_empty() {
            self.starts[p]
        } else {
            self.arrows[r.end - 1].to
        }
    }

    /// No arrow is followed on its path by the reverse arrow.
    pub fn is_nonbacktracking(&self) -> bool {
        self.paths.iter().all(|r| {
            (r.start..r.end.saturating_sub(1)).all(|i| {
                let (a, b) = (&self.arrows[i], &self.arrows[i + 1]);
                (a.from, a.to) != (b.to, b.from)
            })
        })
    }

    /// Cycles and threads of the unmatched arrows.
    pub fn unmatched_part(&self) -> Result<Vec<UnmatchedComponent>> {
        let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        for a in self.arrows.iter().filter(|a| a.partner.is_none()) {
            adj.entry(a.from).or_default().push(a.to);
            adj.entry(a.to).or_default().push(a.from);
        }
        if let Some((v, _)) = adj.iter().find(|(_, n)| n.len() > 2) {
            return Err(Error::Association(format!("unmatched part has degree > 2 at {v:?}")));
        }
        let mut keys: Vec<Vertex> = adj.keys().copied().collect();
        keys.sort();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        // threads first, walked from an endpoint
        for pass in 0..2 {
            for &v in &keys {
                if seen.contains(&v) || (pass == 0 && adj[&v].len() != 1) {
                    continue;
                }
                let mut comp = vec![v];
                seen.insert(v);
                let mut prev = None;
                let mut cur = v;
                loop {
                    let next = adj[&cur].iter().copied().find(|&w| Some(w) != prev && !seen.contains(&w));
                    match next {
                        Some(w) => {
                            seen.insert(w);
                            comp.push(w);
                            prev = Some(cur);
                            cur = w;
                        }
                        None => break,
                    }
                }
                out.push(if pass == 0 { UnmatchedComponent::Thread(comp) } else { UnmatchedComponent::Cycle(comp) });
            }
        }
        Ok(out)
    }
}

/// Builds the `k`-tuple of paths; arrows of path `p` may cancel arrows of any
/// earlier path.
pub fn associate_path(lists: &TranspositionLists) -> Result<PathStructure> {
    if !lists.has_decreasing_specials() {
        return Err(Error::Association(format!("special letters {:?} do not decrease strictly", lists.specials())));
    }
    struct Drawing {
        arrows: Vec<Arrow>,
        // unmatched arrows keyed by (from, to), most recent last
        open: HashMap<(Vertex, Vertex), Vec<usize>>,
        incoming: Vec<Vec<usize>>,
    }
    impl Drawing {
        fn draw(&mut self, from: Vertex, to: Vertex, list: usize, position: usize) -> usize {
            let i = self.arrows.len();
            self.arrows.push(Arrow { from, to, partner: None, list, position });
            match self.open.get_mut(&(to, from)).and_then(|s| s.pop()) {
                Some(j) => {
                    self.arrows[i].partner = Some(j);
                    self.arrows[j].partner = Some(i);
                    self.incoming[from.slot()].retain(|&x| x != j);
                }
                None => {
                    self.open.entry((from, to)).or_default().push(i);
                    self.incoming[to.slot()].push(i);
                }
            }
            i
        }
    }

    let mut d = Drawing {
        arrows: Vec::with_capacity(2 * lists.total_letters()),
        open: HashMap::new(),
        incoming: vec![Vec::new(); 2 * (lists.n() + 1)],
    };
    let mut paths = Vec::new();
    let mut starts = Vec::new();
    for (p, list) in lists.lists().iter().enumerate() {
        let start = Vertex::White(lists.special(p));
        starts.push(start);
        let first = d.arrows.len();
        let mut cur = start;
        for (pos, &a) in list.iter().enumerate() {
            let b = Vertex::Black(a);
            let just = d.draw(cur, b, p, pos);
            let others: Vec<usize> = d.incoming[b.slot()].iter().copied().filter(|&j| j != just).collect();
            cur = match others.as_slice() {
                [] => {
                    d.draw(b, Vertex::White(a), p, pos);
                    Vertex::White(a)
                }
                [j] => {
                    let back = d.arrows[*j].from;
                    d.draw(b, back, p, pos);
                    back
                }
                _ => {
                    return Err(Error::Association(format!(
                        "{} unmatched arrows enter {b:?} at list {} position {pos}",
                        others.len(),
                        p + 1
                    )))
                }
            };
        }
        paths.push(first..d.arrows.len());
    }
    Ok(PathStructure { arrows: d.arrows, paths, starts })
}

/// Unmatched-part statistics next to the cycle type of the product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleComparison {
    pub path_cycles: usize,
    pub path_threads: usize,
    pub product_cycles: usize,
    pub product_special_cycles: usize,
    /// Cycles of `P*` and non-special product cycles carry the same letter sets,
    /// and threads exist exactly when a special letter moves. For `k = 1` the
    /// thread letters also equal the special cycle.
    pub agrees: bool,
}

pub fn unmatched_cycles(lists: &TranspositionLists) -> Result<CycleComparison> {
    let path = associate_path(lists)?;
    let comps = path.unmatched_part()?;
    let specials = lists.specials();
    let prod = lists.product().nontrivial_cycles();
    let (special, plain): (Vec<_>, Vec<_>) = prod.into_iter().partition(|c| c.iter().any(|x| specials.contains(x)));

    let mut cyc_sets: Vec<Vec<usize>> = comps
        .iter()
        .filter(|c| matches!(c, UnmatchedComponent::Cycle(_)))
        .map(UnmatchedComponent::letters)
        .collect();
    let mut plain_sets: Vec<Vec<usize>> = plain
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    cyc_sets.sort();
    plain_sets.sort();
    let threads: Vec<&UnmatchedComponent> = comps.iter().filter(|c| matches!(c, UnmatchedComponent::Thread(_))).collect();

    let mut agrees = cyc_sets == plain_sets && threads.is_empty() == special.is_empty();
    if lists.k() == 1 && agrees && !threads.is_empty() {
        let mut s = special[0].clone();
        s.sort_unstable();
        agrees = threads.len() == 1 && threads[0].letters() == s;
    }
    Ok(CycleComparison {
        path_cycles: cyc_sets.len(),
        path_threads: threads.len(),
        product_cycles: plain_sets.len(),
        product_special_cycles: special.len(),
        agrees,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SigmaVariant {
    /// identity product
    All,
    /// identity product, no letter repeated back to back
    NonBacktracking,
    /// `Σ′` members whose contraction has a strictly positive metric and no stem
    Regular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCount {
    pub count: u128,
    pub members: Option<Vec<TranspositionLists>>,
}

fn check_sigma_bounds(mbar: &[usize], tbar: &[usize], n: usize) -> Result<()> {
    if mbar.len() != tbar.len() || mbar.is_empty() {
        return Err(Error::OutOfRange("need matching, non-empty m̄ and t̄".into()));
    }
    if n > SIGMA_MAX_N || mbar.iter().sum::<usize>() > SIGMA_MAX_LETTERS {
        return Err(Error::OutOfRange(format!("Σ enumeration needs n ≤ {SIGMA_MAX_N} and Σm ≤ {SIGMA_MAX_LETTERS}")));
    }
    // validates the special letters
    TranspositionLists::new(n, tbar.to_vec(), vec![vec![]; mbar.len()])?;
    Ok(())
}

/// Number of words of length `m` over `1..s` (optionally without adjacent
/// repeats), grouped by product permutation.
fn word_counts(m: usize, s: usize, n: usize, distinct_neighbours: bool) -> HashMap<u32, u128> {
    let mut layer: HashMap<(u32, usize), u128> = HashMap::new();
    layer.insert((Permutation::identity(n).rank(), 0), 1);
    for _ in 0..m {
        let mut next: HashMap<(u32, usize), u128> = HashMap::new();
        for ((r, last), c) in layer {
            let p = Permutation::unrank(n, r);
            for a in 1..s {
                if distinct_neighbours && a == last {
                    continue;
                }
                let q = p.compose(&Permutation::transposition(n, a, s)).rank();
                *next.entry((q, a)).or_insert(0) += c;
            }
        }
        layer = next;
    }
    let mut out = HashMap::new();
    for ((r, _), c) in layer {
        *out.entry(r).or_insert(0) += c;
    }
    out
}

fn convolve(a: &HashMap<u32, u128>, b: &HashMap<u32, u128>, n: usize) -> HashMap<u32, u128> {
    let bs: Vec<(Permutation, u128)> = b.iter().map(|(&r, &c)| (Permutation::unrank(n, r), c)).collect();
    let mut out = HashMap::new();
    for (&r, &c) in a {
        let p = Permutation::unrank(n, r);
        for (q, d) in &bs {
            *out.entry(p.compose(q).rank()).or_insert(0) += c * d;
        }
    }
    out
}

fn words(m: usize, s: usize, distinct_neighbours: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(m);
    fn rec(w: &mut Vec<usize>, m: usize, s: usize, d: bool, out: &mut Vec<Vec<usize>>) {
        if w.len() == m {
            out.push(w.clone());
            return;
        }
        for a in 1..s {
            if d && w.last() == Some(&a) {
                continue;
            }
            w.push(a);
            rec(w, m, s, d, out);
            w.pop();
        }
    }
    rec(&mut w, m, s, distinct_neighbours, &mut out);
    out
}

fn word_product(w: &[usize], s: usize, n: usize) -> Permutation {
    w.iter().fold(Permutation::identity(n), |acc, &a| acc.compose(&Permutation::transposition(n, a, s)))
}

/// All tuples with identity product, by joining per-list words on their
/// products.
fn sigma_members(mbar: &[usize], tbar: &[usize], n: usize, distinct: bool) -> Result<Vec<TranspositionLists>> {
    let k = mbar.len();
    let specials: Vec<usize> = (0..k).map(|p| n - tbar[p] - p).collect();
    let mut total = 0usize;
    let mut grouped: Vec<HashMap<u32, Vec<Vec<usize>>>> = Vec::new();
    for p in 0..k {
        let ws = words(mbar[p], specials[p], distinct);
        total += ws.len();
        if total > SIGMA_MEMBER_CAP {
            return Err(Error::OutOfRange(format!("more than {SIGMA_MEMBER_CAP} words to materialize")));
        }
        let mut g: HashMap<u32, Vec<Vec<usize>>> = HashMap::new();
        for w in ws {
            g.entry(word_product(&w, specials[p], n).rank()).or_default().push(w);
        }
        grouped.push(g);
    }
    let mut out = Vec::new();
    fn rec(
        p: usize,
        acc: &Permutation,
        chosen: &mut Vec<Vec<usize>>,
        grouped: &[HashMap<u32, Vec<Vec<usize>>>],
        n: usize,
        tbar: &[usize],
        out: &mut Vec<TranspositionLists>,
    ) -> Result<()> {
        let k = grouped.len();
        if p + 1 == k {
            if let Some(ws) = grouped[p].get(&acc.inverse().rank()) {
                for w in ws {
                    chosen.push(w.clone());
                    out.push(TranspositionLists::new(n, tbar.to_vec(), chosen.clone())?);
                    chosen.pop();
                }
            }
            return Ok(());
        }
        let mut keys: Vec<&u32> = grouped[p].keys().collect();
        keys.sort();
        for r in keys {
            let next = acc.compose(&Permutation::unrank(n, *r));
            for w in &grouped[p][r] {
                chosen.push(w.clone());
                rec(p + 1, &next, chosen, grouped, n, tbar, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(0, &Permutation::identity(n), &mut Vec::new(), &grouped, n, tbar, &mut out)?;
    out.sort_by(|a, b| a.lists.cmp(&b.lists));
    Ok(out)
}

/// `|Σ|`, `|Σ′|` or `|Σ★|` for the given lengths and shifts.
pub fn enumerate_sigma(
    mbar: &[usize],
    tbar: &[usize],
    n: usize,
    variant: SigmaVariant,
    with_members: bool,
) -> Result<SigmaCount> {
    check_sigma_bounds(mbar, tbar, n)?;
    let distinct = variant != SigmaVariant::All;
    if variant == SigmaVariant::Regular {
        let members: Vec<TranspositionLists> = sigma_members(mbar, tbar, n, true)?
            .into_iter()
            .filter(|l| contract_lists(l).map(|d| d.is_regular()).unwrap_or(false))
            .collect();
        return Ok(SigmaCount { count: members.len() as u128, members: with_members.then_some(members) });
    }
    if with_members {
        let members = sigma_members(mbar, tbar, n, distinct)?;
        return Ok(SigmaCount { count: members.len() as u128, members: Some(members) });
    }
    let mut dist: HashMap<u32, u128> = HashMap::from([(Permutation::identity(n).rank(), 1)]);
    for (p, (&m, &t)) in mbar.iter().zip(tbar).enumerate() {
        dist = convolve(&dist, &word_counts(m, n - t - p, n, distinct), n);
    }
    let count = dist.get(&Permutation::identity(n).rank()).copied().unwrap_or(0);
    Ok(SigmaCount { count, members: None })
}

/// Association followed by contraction; `None`-like failures surface as errors.
pub fn contract_lists(lists: &TranspositionLists) -> Result<MetricDiagram> {
    if !lists.is_admissible() {
        return Err(Error::Association("a path would start off its special vertex".into()));
    }
    let path = associate_path(lists)?;
    diagrams::contract(&path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn lists1(n: usize, l: &[usize]) -> TranspositionLists {
        TranspositionLists::single(n, l.to_vec()).unwrap()
    }

    #[test]
    fn coxeter_path_closes() {
        // a..d = 1..4, n = 5
        let l = lists1(5, &[1, 2, 3, 2, 4, 3, 2, 3, 4, 1]);
        assert!(l.product().is_identity());
        let p = associate_path(&l).unwrap();
        assert_eq!(p.arrows.len(), 20);
        assert!(p.is_closed() && p.is_nonbacktracking());
        assert!(p.unmatched_part().unwrap().is_empty());
        assert_eq!(p.end(0), Vertex::White(5));
    }

    #[test]
    fn two_list_example_closes() {
        // (a,b,a),(b,a,b) with t̄ = (0,0): specials n, n−1
        let l = TranspositionLists::new(6, vec![0, 0], vec![vec![1, 2, 1], vec![2, 1, 2]]).unwrap();
        assert!(l.product().is_identity() && l.is_admissible());
        let p = associate_path(&l).unwrap();
        assert!(p.is_closed());
        assert_eq!((p.end(0), p.end(1)), (Vertex::White(6), Vertex::White(5)));
    }

    #[test]
    fn single_letter_is_one_thread() {
        let l = lists1(4, &[2]);
        let p = associate_path(&l).unwrap();
        let comps = p.unmatched_part().unwrap();
        assert_eq!(comps, vec![UnmatchedComponent::Thread(vec![Vertex::White(2), Vertex::Black(2), Vertex::White(4)])]);
        let c = unmatched_cycles(&l).unwrap();
        assert_eq!((c.path_cycles, c.path_threads, c.product_special_cycles), (0, 1, 1));
        assert!(c.agrees);
    }

    #[test]
    fn invalid_lists_rejected() {
        assert!(TranspositionLists::single(4, vec![4]).is_err());
        assert!(TranspositionLists::single(4, vec![0]).is_err());
        // equal special letters: fine for counting, not for paths
        let l = TranspositionLists::new(6, vec![1, 0], vec![vec![1], vec![1]]).unwrap();
        assert!(!l.is_admissible() && associate_path(&l).is_err());
    }

    #[test]
    fn random_lists_cycle_correspondence() {
        let mut rng = stream(17, 0);
        let n = 6;
        let mut checked = 0;
        while checked < 10_000 {
            let k = rng.gen_range(1..=3);
            let shifts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=1)).collect();
            let specials: Vec<usize> = (0..k).map(|p| n - shifts[p] - p).collect();
            if specials.windows(2).any(|w| w[0] <= w[1]) {
                continue;
            }
            let lists = (0..k)
                .map(|p| (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(1..specials[p])).collect())
                .collect();
            let l = TranspositionLists::new(n, shifts, lists).unwrap();
            if !l.is_admissible() {
                continue;
            }
            let c = unmatched_cycles(&l).unwrap();
            assert!(c.agrees, "{l:?} {c:?}");
            checked += 1;
        }
    }

    #[test]
    fn sigma_small_counts() {
        for n in 3..=6 {
            let all = enumerate_sigma(&[2], &[0], n, SigmaVariant::All, false).unwrap();
            assert_eq!(all.count, n as u128 - 1);
            assert_eq!(enumerate_sigma(&[2], &[0], n, SigmaVariant::NonBacktracking, false).unwrap().count, 0);
        }
    }

    #[test]
    fn sigma_members_match_counts() {
        for (mbar, tbar) in [(vec![6], vec![0]), (vec![3, 3], vec![0, 0]), (vec![2, 4], vec![0, 1])] {
            for variant in [SigmaVariant::All, SigmaVariant::NonBacktracking] {
                let c = enumerate_sigma(&mbar, &tbar, 5, variant, false).unwrap();
                let m = enumerate_sigma(&mbar, &tbar, 5, variant, true).unwrap();
                assert_eq!(c.count, m.count);
                assert!(m.members.unwrap().iter().all(|l| l.product().is_identity()));
            }
        }
    }

    #[test]
    fn regular_is_subset() {
        let p = enumerate_sigma(&[6], &[0], 5, SigmaVariant::NonBacktracking, false).unwrap().count;
        let r = enumerate_sigma(&[6], &[0], 5, SigmaVariant::Regular, false).unwrap().count;
        // every length-6 solution is a braid relation, whose initial vertex needs a stem
        assert!(r <= p && r == 0 && p > 0);
        let p = enumerate_sigma(&[8], &[0], 6, SigmaVariant::NonBacktracking, false).unwrap().count;
        let r = enumerate_sigma(&[8], &[0], 6, SigmaVariant::Regular, false).unwrap().count;
        assert!(r <= p && r > 0);
    }

    #[test]
    fn lemma_item_three_exhaustive() {
        // all lists over 1..4 of length ≤ 6 at n = 5
        let n = 5;
        for m in 1..=6 {
            for w in words(m, n, false) {
                let l = lists1(n, &w);
                let p = associate_path(&l).unwrap();
                let in_sigma_prime = l.product().is_identity() && !l.has_adjacent_repeat();
                assert_eq!(in_sigma_prime, p.is_closed() && p.is_nonbacktracking(), "{w:?}");
                assert_eq!(l.product().is_identity(), p.is_closed(), "{w:?}");
            }
        }
    }

    #[test]
    fn bounds_enforced() {
        assert!(enumerate_sigma(&[2], &[0], 9, SigmaVariant::All, false).is_err());
        assert!(enumerate_sigma(&[7, 6], &[0, 0], 6, SigmaVariant::All, false).is_err());
    }
}
