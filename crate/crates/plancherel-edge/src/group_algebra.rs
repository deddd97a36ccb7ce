//! Exact Jucys–Murphy computations in the group algebra of `S_n`.
//!
//! Elements are sparse maps from Lehmer ranks to rationals. Traces are taken
//! in the left regular representation, so `tr a = n!·a(1)`.
//!
//! Every moment is also available through Gelfand–Tsetlin spectra: `X_k`
//! acts on the line of a standard tableau by the content of its `k`-th box,
//! and a tableau of shape `λ` carries weight `dim λ / n!` in the regular
//! representation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::chebyshev::p_poly;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::surd::Surd;

/// Largest `n` accepted by the group-algebra routines (`|S_9| = 362880`).
pub const GROUP_CAP: usize = 9;

/// One-line notation, 0-based images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    /// Transposition of the 1-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a - 1, b - 1);
        p
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Lehmer-code rank in `0..n!`.
    pub fn rank(&self) -> u32 {
        let n = self.n();
        let mut r = 0u32;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&v| v < self.0[i]).count() as u32;
            r = r * (n - i) as u32 + smaller;
        }
        r
    }

    pub fn unrank(n: usize, mut r: u32) -> Permutation {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = (n - i) as u32;
            digits[i] = (r % base) as usize;
            r /= base;
        }
        let mut avail: Vec<u8> = (0..n as u8).collect();
        Permutation(digits.into_iter().map(|d| avail.remove(d)).collect())
    }

    /// Cycles of length at least 2, as 1-based points.
    pub fn nontrivial_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i + 1);
                i = self.0[i] as usize;
            }
            out.push(c);
        }
        out
    }
}

/// Sparse element of `Q[S_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<u32, BigRational>,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > GROUP_CAP {
        return Err(Error::OutOfRange(format!("group algebra needs 1 ≤ n ≤ {GROUP_CAP}, got {n}")));
    }
    Ok(())
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation(&Permutation::identity(n), BigRational::one())
    }

    pub fn from_permutation(p: &Permutation, c: BigRational) -> Self {
        let mut e = Self::zero(p.n());
        e.add_term(p.rank(), c);
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Permutation, &BigRational)> {
        self.terms.iter().map(move |(&r, c)| (Permutation::unrank(self.n, r), c))
    }

    pub fn coefficient(&self, p: &Permutation) -> BigRational {
        self.terms.get(&p.rank()).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, rank: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(rank).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&rank);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::MismatchedOrder(self.n, other.n));
        }
        let mut out = self.clone();
        for (&r, c) in &other.terms {
            out.add_term(r, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        GroupAlgebraElement { n: self.n, terms: self.terms.iter().map(|(&r, c)| (r, c * s)).collect() }
    }

    /// Convolution product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::MismatchedOrder(self.n, other.n));
        }
        let right: Vec<(Permutation, &BigRational)> = other.terms().collect();
        let mut acc: HashMap<u32, BigRational> = HashMap::new();
        for (p, a) in self.terms() {
            for (q, b) in &right {
                let r = p.compose(q).rank();
                *acc.entry(r).or_insert_with(BigRational::zero) += a * *b;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(GroupAlgebraElement { n: self.n, terms })
    }

    pub fn pow(&self, r: usize) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..r {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Trace in the left regular representation.
    pub fn trace(&self) -> BigRational {
        let id = Permutation::identity(self.n).rank();
        self.terms.get(&id).cloned().unwrap_or_else(BigRational::zero) * BigInt::from(factorial(self.n))
    }

    /// `tr(ab)/n!` without forming the product.
    pub fn normalized_trace_of_product(&self, other: &Self) -> Result<BigRational> {
        if self.n != other.n {
            return Err(Error::MismatchedOrder(self.n, other.n));
        }
        let mut acc = BigRational::zero();
        for (p, a) in self.terms() {
            if let Some(b) = other.terms.get(&p.inverse().rank()) {
                acc += a * b;
            }
        }
        Ok(acc)
    }

    /// `P(self)` by Horner's rule, integer coefficients lowest degree first.
    pub fn eval_poly(&self, coeffs: &[BigInt]) -> Result<Self> {
        let mut acc = Self::zero(self.n);
        for c in coeffs.iter().rev() {
            acc = acc.multiply(self)?;
            acc = acc.add(&Self::identity(self.n).scale(&BigRational::from_integer(c.clone())))?;
        }
        Ok(acc)
    }

    /// A random element with small integer coefficients, for property tests.
    pub fn random<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Self {
        let total: u32 = (1..=n as u32).product();
        let mut e = Self::zero(n);
        for _ in 0..terms {
            let c: i64 = rng.gen_range(-5..=5);
            e.add_term(rng.gen_range(0..total), BigRational::from_integer(c.into()));
        }
        e
    }
}

/// `X_k = Σ_{a<k} (a k)` in `Q[S_n]`.
pub fn jm_element(k: usize, n: usize) -> Result<GroupAlgebraElement> {
    check_order(n)?;
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("JM index {k} outside 1..={n}")));
    }
    let mut e = GroupAlgebraElement::zero(n);
    for a in 1..k {
        e.add_term(Permutation::transposition(n, a, k).rank(), BigRational::one());
    }
    Ok(e)
}

/// `Y_{m,r} = Σ_{q ≤ m} X_q^r`.
pub fn y_element(m: usize, r: usize, n: usize) -> Result<GroupAlgebraElement> {
    check_order(n)?;
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("Y index {m} outside 1..={n}")));
    }
    let mut acc = GroupAlgebraElement::zero(n);
    for q in 1..=m {
        acc = acc.add(&jm_element(q, n)?.pow(r)?)?;
    }
    Ok(acc)
}

/// `Σ (a_1 n)…(a_l n)` over words in `1..n` with distinct neighbours.
pub fn nonbacktracking_sum(l: usize, n: usize) -> Result<GroupAlgebraElement> {
    check_order(n)?;
    let mut frontier: HashMap<(u32, usize), BigRational> = HashMap::new();
    frontier.insert((Permutation::identity(n).rank(), 0), BigRational::one());
    for _ in 0..l {
        let mut next: HashMap<(u32, usize), BigRational> = HashMap::new();
        for ((r, last), c) in frontier {
            let p = Permutation::unrank(n, r);
            for a in (1..n).filter(|&a| a != last) {
                let q = p.compose(&Permutation::transposition(n, a, n));
                *next.entry((q.rank(), a)).or_insert_with(BigRational::zero) += &c;
            }
        }
        frontier = next;
    }
    let mut e = GroupAlgebraElement::zero(n);
    for ((r, _), c) in frontier {
        e.add_term(r, c);
    }
    Ok(e)
}

/// A maximal chain `∅ = λ^0 < λ^1 < … < λ^n` with the contents of the added boxes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauPath {
    pub shapes: Vec<Partition>,
    pub contents: Vec<i64>,
}

impl TableauPath {
    pub fn n(&self) -> usize {
        self.contents.len()
    }

    pub fn shape(&self) -> &Partition {
        self.shapes.last().expect("chain starts at the empty partition")
    }

    /// `X_k|_T`.
    pub fn jm_eigenvalue(&self, k: usize) -> i64 {
        self.contents[k - 1]
    }

    /// Builds a chain from the rows in which boxes are added.
    pub fn from_rows(rows: &[usize]) -> Result<Self> {
        let mut shapes = vec![Partition::empty()];
        let mut contents = Vec::new();
        for &i in rows {
            let next = shapes.last().unwrap().add_corner(i)?;
            contents.push(next.row(i) as i64 - i as i64);
            shapes.push(next);
        }
        Ok(TableauPath { shapes, contents })
    }
}

/// All standard tableaux of size `n`, as chains.
pub fn all_tableau_paths(n: usize) -> Vec<TableauPath> {
    fn rec(path: &mut TableauPath, n: usize, out: &mut Vec<TableauPath>) {
        if path.n() == n {
            out.push(path.clone());
            return;
        }
        let cur = path.shape().clone();
        for i in cur.outer_corner_rows() {
            let next = cur.add_corner(i).unwrap();
            path.contents.push(next.row(i) as i64 - i as i64);
            path.shapes.push(next);
            rec(path, n, out);
            path.shapes.pop();
            path.contents.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut TableauPath { shapes: vec![Partition::empty()], contents: vec![] }, n, &mut out);
    out
}

fn power_sum(l: usize, r: u32) -> BigInt {
    (1..=l).map(|i| num_traits::pow(BigInt::from(i), r as usize)).sum()
}

/// `Y_{m,r}|_T` through the Frobenius coordinates of `λ^m`.
pub fn y_eigenvalue(t: &TableauPath, m: usize, r: u32) -> BigInt {
    let fr = t.shapes[m].frobenius();
    let sign = if r % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let mut v: BigInt = fr.f.iter().map(|&f| power_sum(f, r)).sum();
    v += sign * fr.fprime.iter().map(|&f| power_sum(f, r)).sum::<BigInt>();
    if r == 0 {
        // diagonal boxes have content 0 and only count when r = 0
        v += BigInt::from(fr.d());
    }
    v
}

/// `Σ_{q ≤ m} ct_q^r`, the direct content sum.
pub fn y_eigenvalue_direct(t: &TableauPath, m: usize, r: u32) -> BigInt {
    t.contents[..m].iter().map(|&c| num_traits::pow(BigInt::from(c), r as usize)).sum()
}

/// `∏_p Y_{m_p,r_p}|_T`.
pub fn tableau_spectrum(t: &TableauPath, weights: &[(usize, u32)]) -> BigRational {
    BigRational::from_integer(weights.iter().map(|&(m, r)| y_eigenvalue(t, m, r)).product())
}

/// `E f(T)` over tableaux weighted by `dim(shape)/n!`.
pub fn tableau_expectation(n: usize, mut f: impl FnMut(&TableauPath) -> BigRational) -> BigRational {
    let fact = BigInt::from(factorial(n));
    let mut dims: HashMap<Partition, BigInt> = HashMap::new();
    let mut acc = BigRational::zero();
    for t in all_tableau_paths(n) {
        let d = dims.entry(t.shape().clone()).or_insert_with(|| BigInt::from(t.shape().dimension())).clone();
        acc += f(&t) * BigRational::new(d, fact.clone());
    }
    acc
}

fn product_trace(factors: &[GroupAlgebraElement]) -> Result<BigRational> {
    let (last, rest) = factors.split_last().expect("at least one factor");
    let mut acc = GroupAlgebraElement::identity(last.n());
    for f in rest {
        acc = acc.multiply(f)?;
    }
    acc.normalized_trace_of_product(last)
}

/// Sizes `n − t_p − p + 1`.
pub fn shifted_sizes(tbar: &[usize], n: usize) -> Result<Vec<usize>> {
    tbar.iter()
        .enumerate()
        .map(|(p, &t)| {
            n.checked_sub(t + p).filter(|&v| v >= 1).ok_or_else(|| Error::OutOfRange(format!("n − t_{} − {} < 1", p + 1, p)))
        })
        .collect()
}

fn sym_sizes(tbar: &[usize], n: usize) -> Result<Vec<usize>> {
    tbar.iter()
        .map(|&t| n.checked_sub(t).filter(|&v| v >= 1).ok_or_else(|| Error::OutOfRange("n − t_p < 1".into())))
        .collect()
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b || a == 0 {
        return Err(Error::OutOfRange("need matching, non-empty parameter vectors".into()));
    }
    Ok(())
}

/// `∏_p r_p/(4n_p)^{(r_p+1)/2}`.
fn sym_prefactor(rbar: &[u32], sizes: &[usize]) -> Surd {
    rbar.iter().zip(sizes).fold(Surd::rational(BigRational::one()), |acc, (&r, &np)| {
        let pref = Surd::half_power(4 * np as u64, -(r as i64 + 1)) * BigRational::from_integer(r.into());
        acc * pref
    })
}

/// `(1/n!) tr ∏_p Y_{n_p,r_p}` with `n_p = n − t_p`, in the group algebra.
pub fn sym_trace_group(rbar: &[u32], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(rbar.len(), tbar.len())?;
    let sizes = sym_sizes(tbar, n)?;
    let factors = rbar.iter().zip(&sizes).map(|(&r, &m)| y_element(m, r as usize, n)).collect::<Result<Vec<_>>>()?;
    product_trace(&factors)
}

/// Same trace as [`sym_trace_group`], as a tableau expectation.
pub fn sym_trace_tableau(rbar: &[u32], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(rbar.len(), tbar.len())?;
    let sizes = sym_sizes(tbar, n)?;
    let weights: Vec<(usize, u32)> = sizes.iter().copied().zip(rbar.iter().copied()).collect();
    Ok(tableau_expectation(n, |t| tableau_spectrum(t, &weights)))
}

/// `M^sym(r̄, t̄)`, computed both ways; errors if the routes disagree.
pub fn mixed_moment_sym(rbar: &[u32], tbar: &[usize], n: usize) -> Result<Surd> {
    let g = sym_trace_group(rbar, tbar, n)?;
    let t = sym_trace_tableau(rbar, tbar, n)?;
    if g != t {
        return Err(Error::RouteMismatch(format!("M^sym r={rbar:?} t={tbar:?} n={n}: {g} vs {t}")));
    }
    Ok(sym_prefactor(rbar, &sym_sizes(tbar, n)?) * g)
}

/// `(1/n!) tr ∏_p X_{n_p}^{r_p}` with `n_p = n − t_p − p + 1`.
pub fn jm_word_trace_group(rbar: &[u32], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(rbar.len(), tbar.len())?;
    let sizes = shifted_sizes(tbar, n)?;
    let factors = rbar.iter().zip(&sizes).map(|(&r, &m)| jm_element(m, n)?.pow(r as usize)).collect::<Result<Vec<_>>>()?;
    product_trace(&factors)
}

pub fn jm_word_trace_tableau(rbar: &[u32], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(rbar.len(), tbar.len())?;
    let sizes = shifted_sizes(tbar, n)?;
    Ok(tableau_expectation(n, |t| {
        let v: BigInt =
            rbar.iter().zip(&sizes).map(|(&r, &m)| num_traits::pow(BigInt::from(t.jm_eigenvalue(m)), r as usize)).product();
        BigRational::from_integer(v)
    }))
}

/// `M(r̄, t̄) = (∏ n_p^{1/2}/n!) tr ∏ (X_{n_p}/(2√n_p))^{r_p}`.
pub fn mixed_moment(rbar: &[u32], tbar: &[usize], n: usize) -> Result<Surd> {
    let g = jm_word_trace_group(rbar, tbar, n)?;
    let t = jm_word_trace_tableau(rbar, tbar, n)?;
    if g != t {
        return Err(Error::RouteMismatch(format!("M r={rbar:?} t={tbar:?} n={n}: {g} vs {t}")));
    }
    let sizes = shifted_sizes(tbar, n)?;
    let pref = rbar.iter().zip(&sizes).fold(Surd::rational(BigRational::one()), |acc, (&r, &np)| {
        let two = BigRational::from_integer(num_traits::pow(BigInt::from(2), r as usize));
        acc * Surd::half_power(np as u64, 1 - r as i64) * two.recip()
    });
    Ok(pref * g)
}

fn modified_sizes(tbar: &[usize], n: usize) -> Result<Vec<usize>> {
    let sizes = shifted_sizes(tbar, n)?;
    if sizes.iter().any(|&s| s < 2) {
        return Err(Error::OutOfRange("modified moments need n − t_p − p ≥ 1".into()));
    }
    Ok(sizes)
}

/// `(1/n!) tr ∏_p P^{n_p−1}_{m_p}(X_{n_p})`, in the group algebra.
pub fn chebyshev_trace_group(mbar: &[usize], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(mbar.len(), tbar.len())?;
    let sizes = modified_sizes(tbar, n)?;
    let factors = mbar
        .iter()
        .zip(&sizes)
        .map(|(&m, &np)| jm_element(np, n)?.eval_poly(&p_poly(m, np as i64 - 1).coeffs))
        .collect::<Result<Vec<_>>>()?;
    product_trace(&factors)
}

pub fn chebyshev_trace_tableau(mbar: &[usize], tbar: &[usize], n: usize) -> Result<BigRational> {
    check_order(n)?;
    check_lengths(mbar.len(), tbar.len())?;
    let sizes = modified_sizes(tbar, n)?;
    let polys: Vec<_> = mbar.iter().zip(&sizes).map(|(&m, &np)| p_poly(m, np as i64 - 1).coeffs).collect();
    Ok(tableau_expectation(n, |t| {
        let v: BigInt = polys
            .iter()
            .zip(&sizes)
            .map(|(c, &np)| {
                let x = BigInt::from(t.jm_eigenvalue(np));
                c.iter().rev().fold(BigInt::zero(), |acc, a| acc * &x + a)
            })
            .product();
        BigRational::from_integer(v)
    }))
}

/// `M̃(m̄, t̄) = (1/(n! ∏ n_p^{(m_p−1)/2})) tr ∏ P^{n_p−1}_{m_p}(X_{n_p})`.
pub fn modified_moment(mbar: &[usize], tbar: &[usize], n: usize) -> Result<Surd> {
    let g = chebyshev_trace_group(mbar, tbar, n)?;
    let t = chebyshev_trace_tableau(mbar, tbar, n)?;
    if g != t {
        return Err(Error::RouteMismatch(format!("M~ m={mbar:?} t={tbar:?} n={n}: {g} vs {t}")));
    }
    let sizes = modified_sizes(tbar, n)?;
    let pref = mbar
        .iter()
        .zip(&sizes)
        .fold(Surd::rational(BigRational::one()), |acc, (&m, &np)| acc * Surd::half_power(np as u64, 1 - m as i64));
    Ok(pref * g)
}

/// Both sides of the power-to-Chebyshev sum rule for `k = 1`, with the
/// common factor `√Q` dropped, `Q = n − t − 2`:
/// `tr(X^{2r})/(n!(4Q)^r)` and `Σ_m w_m tr V_{2m}(X)/(n! Q^m)`, where
/// `X = X_{n−t}` and `V_l = Q^{l/2} U_l(·/(2√Q))`.
pub fn snyder_sum_sides(r: usize, t: usize, n: usize) -> Result<(BigRational, BigRational)> {
    check_order(n)?;
    let np = n.checked_sub(t).filter(|&v| v >= 3).ok_or_else(|| Error::OutOfRange("need n − t ≥ 3".into()))?;
    let q = BigInt::from(np as i64 - 2);
    let x = jm_element(np, n)?;
    let lhs = x.pow(2 * r)?.normalized_trace_of_product(&GroupAlgebraElement::identity(n))?
        / BigRational::from_integer(num_traits::pow(BigInt::from(4) * &q, r));
    let mut rhs = BigRational::zero();
    for (deg, w) in crate::chebyshev::snyder_expand(2 * r)? {
        let v = crate::chebyshev::v_poly(deg, np as i64 - 1);
        let tr = x.eval_poly(&v)?.normalized_trace_of_product(&GroupAlgebraElement::identity(n))?;
        rhs += w * tr / BigRational::from_integer(num_traits::pow(q.clone(), deg / 2));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn rank_round_trip() {
        for n in 1..=6 {
            let total: u32 = (1..=n as u32).product();
            for r in 0..total {
                assert_eq!(Permutation::unrank(n, r).rank(), r);
            }
        }
    }

    #[test]
    fn jm_examples() {
        assert!(jm_element(1, 5).unwrap().is_empty());
        let x2 = jm_element(2, 5).unwrap();
        assert_eq!(x2.len(), 1);
        assert_eq!(x2.coefficient(&Permutation::transposition(5, 1, 2)), q(1));
        let x4 = jm_element(4, 5).unwrap();
        assert_eq!(x4.len(), 3);
        assert!(x4.terms().all(|(_, c)| c == &q(1)));
        assert!(jm_element(6, 5).is_err());
    }

    #[test]
    fn trace_examples() {
        for n in [4, 5] {
            let x = jm_element(n, n).unwrap();
            assert!(x.trace().is_zero());
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(x.pow(2).unwrap().trace() / q(fact), q(n as i64 - 1));
        }
    }

    #[test]
    fn coxeter_relation() {
        let n = 4;
        for a in 1..n {
            for b in 1..n {
                if a == b {
                    continue;
                }
                let (ta, tb) = (Permutation::transposition(n, a, n), Permutation::transposition(n, b, n));
                let mut p = Permutation::identity(n);
                for _ in 0..3 {
                    p = p.compose(&ta).compose(&tb);
                }
                assert!(p.is_identity());
            }
        }
    }

    #[test]
    fn y_examples() {
        let n = 5;
        assert!(y_element(n, 1, n).unwrap().trace().is_zero());
        assert_eq!(y_element(n, 2, n).unwrap().trace() / q(120), q(10));
        let y = y_element(n, 3, n).unwrap();
        let mut rng = stream(4, 0);
        for _ in 0..5 {
            let g = GroupAlgebraElement::random(n, 4, &mut rng);
            assert_eq!(y.multiply(&g).unwrap(), g.multiply(&y).unwrap());
        }
    }

    #[test]
    fn figure_one_chain_spectrum() {
        // rows in which the boxes of the example chain are added
        let t = TableauPath::from_rows(&[1, 1, 2, 2, 3, 1, 1, 2]).unwrap();
        let eig: Vec<i64> = (1..=8).map(|k| t.jm_eigenvalue(k)).collect();
        assert_eq!(eig, vec![0, 1, -1, 0, -2, 2, 3, 1]);
        assert_eq!(tableau_spectrum(&t, &[(8, 0)]), q(8));
    }

    #[test]
    fn spectrum_routes_agree_on_random_chains() {
        let paths = all_tableau_paths(8);
        let mut rng = stream(8, 0);
        for _ in 0..100 {
            let t = &paths[rng.gen_range(0..paths.len())];
            for m in 1..=8 {
                for r in 0..6 {
                    assert_eq!(y_eigenvalue(t, m, r), y_eigenvalue_direct(t, m, r));
                }
            }
        }
    }

    #[test]
    fn sym_examples() {
        assert!(mixed_moment_sym(&[1], &[0], 5).unwrap().is_zero());
        let v = mixed_moment_sym(&[2], &[0], 6).unwrap();
        assert_eq!(v, Surd::half_power(24, -3) * q(30));
        let g = sym_trace_group(&[2, 2], &[0, 1], 6).unwrap();
        let t = sym_trace_tableau(&[2, 2], &[0, 1], 6).unwrap();
        assert_eq!(g, t);
    }

    #[test]
    fn chebyshev_trace_examples() {
        assert!(chebyshev_trace_group(&[2], &[0], 5).unwrap().is_zero());
        let v = modified_moment(&[2, 2], &[0, 0], 5).unwrap();
        assert!(v.to_f64() >= 0.0);
    }

    #[test]
    fn lemma_cheb_identity() {
        for n in 2..=5 {
            let x = jm_element(n, n).unwrap();
            for l in 0..=5 {
                let lhs = x.eval_poly(&p_poly(l, n as i64 - 1).coeffs).unwrap();
                assert_eq!(lhs, nonbacktracking_sum(l, n).unwrap(), "l={l} n={n}");
            }
        }
    }

    #[test]
    fn jm_elements_commute() {
        for n in 2..=6 {
            let xs: Vec<_> = (1..=n).map(|k| jm_element(k, n).unwrap()).collect();
            for a in &xs {
                for b in &xs {
                    assert_eq!(a.multiply(b).unwrap(), b.multiply(a).unwrap());
                }
            }
        }
    }

    #[test]
    fn moment_routes_agree() {
        for n in 3..=7 {
            for r in 0..=4 {
                mixed_moment_sym(&[r], &[1], n).unwrap();
                mixed_moment(&[r], &[0], n).unwrap();
                for r2 in 0..=3 {
                    mixed_moment_sym(&[r, r2], &[0, 2], n).unwrap();
                    mixed_moment(&[r, r2], &[0, 0], n).unwrap();
                }
            }
        }
    }

    #[test]
    fn snyder_sum_rule() {
        for n in 4..=7 {
            for t in 0..=1 {
                for r in 1..=4 {
                    let (l, rr) = snyder_sum_sides(r, t, n).unwrap();
                    assert_eq!(l, rr, "r={r} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn caps_enforced() {
        assert!(jm_element(2, 10).is_err());
        assert!(mixed_moment(&[2], &[5], 5).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn trace_is_cyclic(seed in 0u64..10_000, n in 2usize..=6) {
            let mut rng = stream(seed, 0);
            let a = GroupAlgebraElement::random(n, 6, &mut rng);
            let b = GroupAlgebraElement::random(n, 6, &mut rng);
            prop_assert_eq!(a.multiply(&b).unwrap().trace(), b.multiply(&a).unwrap().trace());
            prop_assert_eq!(a.normalized_trace_of_product(&b).unwrap() * BigRational::from_integer(BigInt::from(factorial(n))),
                a.multiply(&b).unwrap().trace());
        }

        #[test]
        fn multiplication_is_associative(seed in 0u64..10_000, n in 2usize..=5) {
            let mut rng = stream(seed, 1);
            let a = GroupAlgebraElement::random(n, 4, &mut rng);
            let b = GroupAlgebraElement::random(n, 4, &mut rng);
            let c = GroupAlgebraElement::random(n, 4, &mut rng);
            prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        }
    }
}
