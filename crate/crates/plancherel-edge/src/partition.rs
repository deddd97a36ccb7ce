//! Partitions, corners, hooks and coordinates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition stored as its non-increasing positive parts.
///
/// The conjugate is built eagerly so corner and hook queries are O(1) lookups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    #[serde(skip)]
    conj: Vec<usize>,
    #[serde(skip)]
    size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CornerKind {
    Inner,
    Outer,
}

/// An inner (removable) or outer (addable) corner. Rows and columns are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub row: usize,
    pub col: usize,
    pub kind: CornerKind,
    pub content: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCoords {
    pub f: Vec<usize>,
    pub fprime: Vec<usize>,
}

impl FrobeniusCoords {
    pub fn d(&self) -> usize {
        self.f.len()
    }
}

/// Kerov interlacing coordinates. `iota` holds the contents of the outer
/// corners and `o` those of the inner corners, both decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KerovCoords {
    pub iota: Vec<i64>,
    pub o: Vec<i64>,
}

fn conjugate_parts(parts: &[usize]) -> Vec<usize> {
    let width = parts.first().copied().unwrap_or(0);
    let mut conj = vec![0; width];
    // parts are sorted, so column j has length = number of rows longer than j
    let mut i = parts.len();
    for (j, c) in conj.iter_mut().enumerate() {
        while i > 0 && parts[i - 1] <= j {
            i -= 1;
        }
        *c = i;
    }
    conj
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new(), conj: Vec::new(), size: 0 }
    }

    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not non-increasing")));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Caller guarantees `parts` is non-increasing with no zeros.
    pub(crate) fn from_sorted(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        let conj = conjugate_parts(&parts);
        let size = parts.iter().sum();
        Partition { parts, conj, size }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// λ_i for 1-based `i`, zero beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// λ'_j for 1-based `j`.
    pub fn col(&self, j: usize) -> usize {
        if j == 0 {
            return usize::MAX;
        }
        self.conj.get(j - 1).copied().unwrap_or(0)
    }

    pub fn conjugate_parts(&self) -> &[usize] {
        &self.conj
    }

    pub fn conjugate(&self) -> Partition {
        Partition::from_sorted(self.conj.clone())
    }

    /// Hook length of box (i, j), 1-based. The box must lie in the diagram.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= self.row(i) && i <= self.col(j));
        self.row(i) - j + self.col(j) - i + 1
    }

    /// Rows holding an inner corner, increasing.
    pub fn inner_corner_rows(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.row(i) > self.row(i + 1)).collect()
    }

    /// Rows holding an outer corner, increasing; the row after the last one is included.
    pub fn outer_corner_rows(&self) -> Vec<usize> {
        (1..=self.len() + 1).filter(|&i| i == 1 || self.row(i - 1) > self.row(i)).collect()
    }

    pub fn corners(&self) -> Vec<Corner> {
        let mut out = Vec::new();
        for i in 1..=self.len() + 1 {
            if i == 1 || self.row(i - 1) > self.row(i) {
                let col = self.row(i) + 1;
                out.push(Corner { row: i, col, kind: CornerKind::Outer, content: col as i64 - i as i64 });
            }
            if i <= self.len() && self.row(i) > self.row(i + 1) {
                let col = self.row(i);
                out.push(Corner { row: i, col, kind: CornerKind::Inner, content: col as i64 - i as i64 });
            }
        }
        out
    }

    /// Removes the inner corner in row `i` (1-based).
    pub fn remove_corner(&self, i: usize) -> Result<Partition> {
        if i == 0 || i > self.len() || self.row(i) <= self.row(i + 1) {
            return Err(Error::OutOfRange(format!("no inner corner in row {i} of {self}")));
        }
        let mut parts = self.parts.clone();
        parts[i - 1] -= 1;
        if parts[i - 1] == 0 {
            parts.pop();
        }
        Ok(Partition::from_sorted(parts))
    }

    /// Adds a box at the outer corner in row `i` (1-based).
    pub fn add_corner(&self, i: usize) -> Result<Partition> {
        if i == 0 || i > self.len() + 1 || (i > 1 && self.row(i - 1) <= self.row(i)) {
            return Err(Error::OutOfRange(format!("no outer corner in row {i} of {self}")));
        }
        let mut parts = self.parts.clone();
        if i == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[i - 1] += 1;
        }
        Ok(Partition::from_sorted(parts))
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn dimension(&self) -> BigUint {
        let mut num = BigUint::one();
        for k in 2..=self.size {
            num *= k;
        }
        let mut den = BigUint::one();
        for i in 1..=self.len() {
            for j in 1..=self.row(i) {
                den *= self.hook(i, j);
            }
        }
        num / den
    }

    pub fn log_dimension(&self) -> f64 {
        let mut acc = ln_factorial(self.size);
        for i in 1..=self.len() {
            for j in 1..=self.row(i) {
                acc -= (self.hook(i, j) as f64).ln();
            }
        }
        acc
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let d = (1..=self.len()).take_while(|&j| self.row(j) >= j).count();
        FrobeniusCoords {
            f: (1..=d).map(|j| self.row(j) - j).collect(),
            fprime: (1..=d).map(|j| self.col(j) - j).collect(),
        }
    }

    pub fn kerov(&self) -> KerovCoords {
        let mut iota = Vec::new();
        let mut o = Vec::new();
        for c in self.corners() {
            match c.kind {
                CornerKind::Outer => iota.push(c.content),
                CornerKind::Inner => o.push(c.content),
            }
        }
        KerovCoords { iota, o }
    }

    /// μ ≤ λ in the containment order.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Contents of all boxes, row by row.
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.len()).flat_map(move |i| (1..=self.row(i)).map(move |j| j as i64 - i as i64))
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition::from_sorted(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// `true` iff μ ≤ λ.
pub fn contains(mu: &Partition, lambda: &Partition) -> bool {
    mu.contained_in(lambda)
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::InvalidPartition(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p("4,3,1").conjugate(), p("3,2,2,1"));
        assert_eq!(p("").conjugate(), p(""));
        assert_eq!(p("5").conjugate(), p("1,1,1,1,1"));
    }

    #[test]
    fn corners_of_431() {
        let k = p("4,3,1").kerov();
        assert_eq!(k.o, vec![3, 1, -2]);
        assert_eq!(k.iota, vec![4, 2, -1, -3]);
    }

    #[test]
    fn corners_of_single_box() {
        let c = p("1").corners();
        let inner: Vec<_> = c.iter().filter(|c| c.kind == CornerKind::Inner).collect();
        let outer: Vec<_> = c.iter().filter(|c| c.kind == CornerKind::Outer).collect();
        assert_eq!(inner.len(), 1);
        assert_eq!((inner[0].row, inner[0].col, inner[0].content), (1, 1, 0));
        assert_eq!(outer.iter().map(|c| (c.row, c.col, c.content)).collect::<Vec<_>>(), vec![(1, 2, 1), (2, 1, -1)]);
    }

    #[test]
    fn corners_of_221() {
        let l = p("2,2,1");
        assert_eq!(l.inner_corner_rows(), vec![2, 3]);
        assert_eq!(l.outer_corner_rows(), vec![1, 3, 4]);
    }

    #[test]
    fn empty_has_one_outer_corner() {
        let c = Partition::empty().corners();
        assert_eq!(c, vec![Corner { row: 1, col: 1, kind: CornerKind::Outer, content: 0 }]);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(p("2,1").dimension(), BigUint::from(2u32));
        assert_eq!(p("7").dimension(), BigUint::one());
        let total: BigUint = Partition::all_of_size(4).iter().map(|l| l.dimension().pow(2)).sum();
        assert_eq!(total, BigUint::from(24u32));
    }

    fn chains(l: &Partition, memo: &mut HashMap<Partition, BigUint>) -> BigUint {
        if l.is_empty() {
            return BigUint::one();
        }
        if let Some(v) = memo.get(l) {
            return v.clone();
        }
        let v = l.inner_corner_rows().into_iter().map(|i| chains(&l.remove_corner(i).unwrap(), memo)).sum();
        memo.insert(l.clone(), v);
        memo[l].clone()
    }

    #[test]
    fn dimension_counts_removal_chains() {
        let mut memo = HashMap::new();
        for n in [0, 1, 5, 9, 14] {
            for l in Partition::all_of_size(n) {
                assert_eq!(l.dimension(), chains(&l, &mut memo), "{l}");
            }
        }
        for s in ["10,8,5,4,2,1", "6,6,6,6,6", "12,9,5,3,1"] {
            let l = p(s);
            assert_eq!(l.dimension(), chains(&l, &mut memo), "{l}");
        }
    }

    #[test]
    fn plancherel_identity() {
        let mut fact = BigUint::one();
        for n in 1..=12usize {
            fact *= n;
            let total: BigUint = Partition::all_of_size(n).iter().map(|l| l.dimension().pow(2)).sum();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn frobenius_examples() {
        let fr = p("4,3,1").frobenius();
        assert_eq!((fr.d(), fr.f.clone(), fr.fprime.clone()), (2, vec![3, 1], vec![2, 0]));
        let fr = p("1").frobenius();
        assert_eq!((fr.f, fr.fprime), (vec![0], vec![0]));
        for k in 1..6 {
            let fr = Partition::new(vec![k]).unwrap().frobenius();
            assert_eq!((fr.f, fr.fprime), (vec![k - 1], vec![0]));
        }
    }

    #[test]
    fn kerov_of_single_box() {
        let k = p("1").kerov();
        assert_eq!((k.iota, k.o), (vec![1, -1], vec![0]));
    }

    #[test]
    fn containment() {
        assert!(contains(&p("2,1"), &p("4,3,1")));
        assert!(!contains(&p("5"), &p("4,3,1")));
        assert!(!contains(&p("2,2"), &p("2,1")));
    }

    #[test]
    fn log_dimension_matches_exact() {
        for s in ["40,30,20,10,5,3", "13,13,13,13,13,13,13,13,13,13,13,13,13", "170"] {
            let l = p(s);
            let ld = l.log_dimension();
            let d = l.dimension();
            let bits = d.bits() as i64;
            let shift = (bits - 60).max(0) as usize;
            let top = (&d >> shift).to_string().parse::<f64>().unwrap();
            let exact_ln = top.ln() + shift as f64 * std::f64::consts::LN_2;
            assert!(((ld - exact_ln) / exact_ln.max(1.0)).abs() < 1e-9, "{s}: {ld} vs {exact_ln}");
        }
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(p("4,3,1").to_string(), "4,3,1");
        assert_eq!(p("").to_string(), "");
        assert!("1,2".parse::<Partition>().is_err());
    }

    pub(crate) fn arb_partition(max: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1usize..12, 0..max).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_involution(l in arb_partition(10)) {
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
            prop_assert_eq!(l.conjugate().size(), l.size());
        }

        #[test]
        fn frobenius_swaps_under_conjugation(l in arb_partition(10)) {
            let a = l.frobenius();
            let b = l.conjugate().frobenius();
            prop_assert_eq!(&a.f, &b.fprime);
            prop_assert_eq!(&a.fprime, &b.f);
            let total: usize = a.f.iter().zip(&a.fprime).map(|(x, y)| x + y + 1).sum();
            prop_assert_eq!(total, l.size());
            prop_assert!(a.f.windows(2).all(|w| w[0] > w[1]));
            prop_assert!(a.fprime.windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn kerov_interlaces(l in arb_partition(10)) {
            let k = l.kerov();
            prop_assert_eq!(k.iota.len(), k.o.len() + 1);
            let mut merged = Vec::new();
            for (i, x) in k.iota.iter().enumerate() {
                merged.push(*x);
                if let Some(y) = k.o.get(i) { merged.push(*y); }
            }
            prop_assert!(merged.windows(2).all(|w| w[0] > w[1]));
            let inner: Vec<i64> = (1..=l.len()).filter(|&i| l.row(i) > l.row(i + 1))
                .map(|i| l.row(i) as i64 - i as i64).collect();
            prop_assert_eq!(k.o, inner);
        }

        #[test]
        fn removing_corners_stays_valid(l in arb_partition(10)) {
            for i in l.inner_corner_rows() {
                let m = l.remove_corner(i).unwrap();
                prop_assert_eq!(m.size() + 1, l.size());
                prop_assert!(m.contained_in(&l));
                prop_assert!(Partition::new(m.parts().to_vec()).is_ok());
            }
        }
    }
}
