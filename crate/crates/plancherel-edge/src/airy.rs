//! Limit objects of the edge expansion.
//!
//! A `k`-diagram with `s` transitions has `3s − k` edges, and circuit `p`
//! runs `c_p(e)` times along edge `e`. Metrics live on the polytope
//! `Δ_D(ᾱ) = {ξ > 0 : Σ_e c_p(e) ξ(e) = α_p}`. For `k ≤ 2` every edge has
//! type `(2)`, `(2,0)`, `(0,2)` or `(1,1)`, so integrals over `Δ_D` reduce to
//! one dimension: fix the total length `σ` of the shared `(1,1)` edges and
//! the other edges fill two simplices.
//!
//! The measure on `Δ_D` is scaled so that its mass is the limit of
//! `|Δ̃_D(Lm̄)| / L^{3s−2k}` along even `m̄`, where `Δ̃_D` counts positive
//! integer solutions. [`normalization_constant`] estimates that limit from
//! exact lattice counts and compares it with `gcd(minors)/√det(CCᵀ)`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::diagrams::{generate_diagrams, MetricDiagram};
use crate::dynamics::EdgeProcessSample;
use crate::error::{Error, Result};
use crate::partition::ln_factorial;
use crate::quadrature::Rule;
use crate::rng;

/// Largest `s` summed in the one-circuit series.
pub const S_MAX_K1: usize = 6;
/// Largest `s` summed for two circuits.
pub const S_MAX_K2: usize = 6;
/// Constant `C` in the diagram-count bound `D(s) ≤ C^{s−1} s^s` used for
/// tails of the one-circuit series.
pub const TAIL_CONSTANT: f64 = 3.0;
/// Upper end of the `ξ` quadrature.
pub const XI_MAX: f64 = 8.0;
/// Lines below `−FLOOR` are dropped from Laplace sums.
pub const FLOOR: f64 = 25.0;

/// Numerical knobs for ψ and φ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryOptions {
    pub s_max_k1: usize,
    pub s_max_k2: usize,
    pub tail_constant: f64,
    pub xi_max: f64,
    /// Gauss–Legendre panels per `ξ` axis.
    pub panels: usize,
    /// Nodes per panel.
    pub nodes: usize,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        TheoryOptions { s_max_k1: S_MAX_K1, s_max_k2: S_MAX_K2, tail_constant: TAIL_CONSTANT, xi_max: XI_MAX, panels: 8, nodes: 16 }
    }
}

/// A value with a one-sigma error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// Edge-type census of a diagram with at most two circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeTypes {
    pub k: usize,
    /// Edges used only by circuit 1 (resp. 2), traversed twice.
    pub own: [usize; 2],
    /// Edges traversed once by each circuit.
    pub shared: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Own(usize),
    Shared,
}

fn edge_kinds(d: &MetricDiagram) -> Result<(usize, Vec<Kind>)> {
    let k = d.k();
    if k == 0 || k > 2 {
        return Err(Error::OutOfRange(format!("limit objects need 1 or 2 circuits, got {k}")));
    }
    let kinds = d
        .edges
        .iter()
        .map(|e| match e.c_p.as_slice() {
            [2] => Ok(Kind::Own(0)),
            [2, 0] => Ok(Kind::Own(0)),
            [0, 2] => Ok(Kind::Own(1)),
            [1, 1] => Ok(Kind::Shared),
            c => Err(Error::Infeasible(format!("edge traversal counts {c:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((k, kinds))
}

impl EdgeTypes {
    pub fn of(d: &MetricDiagram) -> Result<Self> {
        let (k, kinds) = edge_kinds(d)?;
        let mut t = EdgeTypes { k, own: [0, 0], shared: 0 };
        for kind in kinds {
            match kind {
                Kind::Own(p) => t.own[p] += 1,
                Kind::Shared => t.shared += 1,
            }
        }
        Ok(t)
    }

    pub fn edges(&self) -> usize {
        self.own[0] + self.own[1] + self.shared
    }

    /// Coefficient matrix `c_p(e)`, one row per circuit, edges grouped by type.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let mut rows = vec![Vec::new(); self.k];
        if self.k == 1 {
            rows[0] = vec![2; self.own[0]];
            return rows;
        }
        for (kind, n) in [((2, 0), self.own[0]), ((0, 2), self.own[1]), ((1, 1), self.shared)] {
            for _ in 0..n {
                rows[0].push(kind.0);
                rows[1].push(kind.1);
            }
        }
        rows
    }

    /// Whether `Δ_D(ᾱ)` has a point with all coordinates positive and the
    /// solution space has dimension `E − k`.
    pub fn is_feasible(&self, alpha: &[f64]) -> bool {
        if alpha.len() != self.k || alpha.iter().any(|&a| !(a > 0.0)) {
            return false;
        }
        if self.k == 1 {
            return self.own[0] > 0;
        }
        let [a, b] = self.own;
        match (a > 0, b > 0, self.shared > 0) {
            (true, true, _) => true,
            (false, true, true) => alpha[0] < alpha[1],
            (true, false, true) => alpha[1] < alpha[0],
            _ => false,
        }
    }

    /// `gcd` of the maximal minors and `|det|` of the pivot block used to
    /// parametrize the polytope.
    fn lattice_factors(&self) -> (i64, i64) {
        let m = self.matrix();
        let e = self.edges();
        let g = if self.k == 1 {
            2
        } else {
            let mut g = 0i64;
            for i in 0..e {
                for j in i + 1..e {
                    g = g.gcd(&(m[0][i] * m[1][j] - m[0][j] * m[1][i]));
                }
            }
            g
        };
        let pivot = match (self.k, self.own) {
            (1, _) => 2,
            (_, [a, b]) if a > 0 && b > 0 => 4,
            _ => 2,
        };
        (g, pivot)
    }

    fn gram_determinant(&self) -> f64 {
        if self.k == 1 {
            return 4.0 * self.own[0] as f64;
        }
        let (a, b, c) = (self.own[0] as f64, self.own[1] as f64, self.shared as f64);
        (4.0 * a + c) * (4.0 * b + c) - c * c
    }

    /// Lebesgue volume of the polytope in the free coordinates, weighted by
    /// `exp(−rate·σ)`.
    fn parametric_integral(&self, alpha: &[f64], rate: f64) -> f64 {
        if !self.is_feasible(alpha) {
            return 0.0;
        }
        if self.k == 1 {
            return simplex(alpha[0] / 2.0, self.own[0]);
        }
        let ([a, b], c) = (self.own, self.shared);
        if c == 0 {
            return simplex(alpha[0] / 2.0, a) * simplex(alpha[1] / 2.0, b);
        }
        if a == 0 {
            return simplex(alpha[0], c) * (-rate * alpha[0]).exp() * simplex((alpha[1] - alpha[0]) / 2.0, b);
        }
        if b == 0 {
            return simplex(alpha[1], c) * (-rate * alpha[1]).exp() * simplex((alpha[0] - alpha[1]) / 2.0, a);
        }
        let top = alpha[0].min(alpha[1]);
        sigma_rule().integrate_panels(0.0, top, 8, |sg| {
            (-rate * sg).exp() * simplex(sg, c) * simplex((alpha[0] - sg) / 2.0, a) * simplex((alpha[1] - sg) / 2.0, b)
        })
    }

    /// `∫_{Δ_D(ᾱ)} exp(−rate·σ)` under the normalized measure.
    pub fn integral(&self, alpha: &[f64], rate: f64) -> f64 {
        let (g, pivot) = self.lattice_factors();
        self.parametric_integral(alpha, rate) * g as f64 / pivot as f64
    }
}

fn sigma_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(16))
}

/// `x^{j−1}/(j−1)!`, the `(j−1)`-volume of `{y ∈ R_+^j : Σy = x}` in `j−1`
/// free coordinates.
fn simplex(x: f64, j: usize) -> f64 {
    if j == 0 || x <= 0.0 {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 1..j {
        v *= x / i as f64;
    }
    v
}

/// The polytope `Δ_D(ᾱ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub types: EdgeTypes,
    pub alpha: Vec<f64>,
    /// Equality system, one row per circuit and one column per edge of the
    /// source diagram.
    pub equations: Vec<Vec<u8>>,
}

impl Polytope {
    pub fn new(d: &MetricDiagram, alpha: &[f64]) -> Result<Self> {
        let types = EdgeTypes::of(d)?;
        if alpha.len() != types.k {
            return Err(Error::OutOfRange(format!("{} circuits but {} alphas", types.k, alpha.len())));
        }
        let equations = (0..types.k).map(|p| d.edges.iter().map(|e| e.c_p[p]).collect()).collect();
        Ok(Polytope { types, alpha: alpha.to_vec(), equations })
    }

    pub fn ambient_dimension(&self) -> usize {
        self.types.edges()
    }

    pub fn dimension(&self) -> usize {
        self.types.edges() - self.types.k
    }

    pub fn is_feasible(&self) -> bool {
        self.types.is_feasible(&self.alpha)
    }

    pub fn volume(&self) -> f64 {
        self.types.integral(&self.alpha, 0.0)
    }
}

/// Result of [`lattice_count`]. `feasible` is false when the parity
/// condition fails; the count is then zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCount {
    pub count: BigUint,
    pub feasible: bool,
}

/// Number of positive integer metrics `ω` with `Σ_e c_p(e)ω(e) = m_p`.
pub fn lattice_count(d: &MetricDiagram, mbar: &[u64]) -> Result<LatticeCount> {
    lattice_count_types(&EdgeTypes::of(d)?, mbar)
}

fn compositions(total: u64, parts: usize) -> BigUint {
    if parts == 0 {
        return BigUint::from((total == 0) as u8);
    }
    if total < parts as u64 {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(total - 1), BigUint::from(parts as u64 - 1))
}

fn lattice_count_types(t: &EdgeTypes, mbar: &[u64]) -> Result<LatticeCount> {
    if mbar.len() != t.k {
        return Err(Error::OutOfRange(format!("{} circuits but {} lengths", t.k, mbar.len())));
    }
    let infeasible = LatticeCount { count: BigUint::zero(), feasible: false };
    if t.k == 1 {
        if mbar[0] % 2 == 1 {
            return Ok(infeasible);
        }
        return Ok(LatticeCount { count: compositions(mbar[0] / 2, t.own[0]), feasible: true });
    }
    let ([a, b], c) = (t.own, t.shared);
    let (m1, m2) = (mbar[0], mbar[1]);
    if c == 0 {
        if m1 % 2 == 1 || m2 % 2 == 1 {
            return Ok(infeasible);
        }
        return Ok(LatticeCount { count: compositions(m1 / 2, a) * compositions(m2 / 2, b), feasible: true });
    }
    if (m1 + m2) % 2 == 1 {
        return Ok(infeasible);
    }
    let mut count = BigUint::zero();
    let mut sg = c as u64 + (m1 + c as u64) % 2;
    while sg <= m1.min(m2) {
        count += compositions(sg, c) * compositions((m1 - sg) / 2, a) * compositions((m2 - sg) / 2, b);
        sg += 2;
    }
    Ok(LatticeCount { count, feasible: true })
}

/// Extrapolated `lim |Δ̃_D(m̄)| / Vol(Δ_D(m̄))` with `Vol` the volume induced
/// from `R^E`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationEstimate {
    pub value: f64,
    pub error: f64,
    /// `gcd(maximal minors)/√det(CCᵀ)`.
    pub theory: f64,
    /// Whether the extrapolation settled to 1%.
    pub converged: bool,
}

/// Estimates the normalization along `m̄ = 2L·direction` for doubling `L`,
/// with one Richardson step on the `O(1/L)` correction.
pub fn normalization_constant(d: &MetricDiagram, direction: &[u64]) -> Result<NormalizationEstimate> {
    let t = EdgeTypes::of(d)?;
    let alpha: Vec<f64> = direction.iter().map(|&x| x as f64).collect();
    if !t.is_feasible(&alpha) || (t.shared > 0 && t.own.contains(&0)) {
        return Err(Error::Infeasible(format!("direction {direction:?} for edge types {t:?}")));
    }
    let (g, pivot) = t.lattice_factors();
    let det = t.gram_determinant();
    let base = 4 * t.edges() as u64;
    let mut ratios = Vec::new();
    for i in 0..5 {
        let l = base << i;
        let m: Vec<u64> = direction.iter().map(|&x| 2 * l * x).collect();
        let mf: Vec<f64> = m.iter().map(|&x| x as f64).collect();
        let count = lattice_count_types(&t, &m)?.count.to_f64().unwrap_or(f64::INFINITY);
        let vol = t.parametric_integral(&mf, 0.0) * det.sqrt() / pivot as f64;
        ratios.push(count / vol);
    }
    let rich: Vec<f64> = ratios.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
    let value = rich[rich.len() - 1];
    let error = (value - rich[rich.len() - 2]).abs();
    Ok(NormalizationEstimate { value, error, theory: g as f64 / det.sqrt(), converged: error <= 0.01 * value.abs() })
}

fn rate(tau: &[f64]) -> f64 {
    if tau.len() == 2 {
        (tau[0] - tau[1]).abs()
    } else {
        0.0
    }
}

/// `I^D(ᾱ,τ̄) = ∫_{Δ_D(ᾱ)} exp(−Σ_e |τ_{p+(e)} − τ_{p−(e)}| ω(e)) dω`.
/// Zero when the polytope is infeasible.
pub fn i_integral(d: &MetricDiagram, alpha: &[f64], tau: &[f64]) -> Result<f64> {
    let p = Polytope::new(d, alpha)?;
    if tau.len() != p.types.k {
        return Err(Error::OutOfRange("tau and alpha lengths differ".into()));
    }
    Ok(p.types.integral(alpha, rate(tau)))
}

/// Hit-and-run estimate of `I^D`: the exact volume times the chain average
/// of the exponential weight, with batch-means error.
pub fn i_integral_mc(d: &MetricDiagram, alpha: &[f64], tau: &[f64], samples: usize, seed: u64) -> Result<Estimate> {
    let p = Polytope::new(d, alpha)?;
    let (_, kinds) = edge_kinds(d)?;
    let t = p.types;
    if !p.is_feasible() || (t.shared > 0 && t.own.contains(&0)) {
        return Ok(Estimate { value: 0.0, stderr: 0.0 });
    }
    let e = kinds.len();
    let rows: Vec<Vec<f64>> = p.equations.iter().map(|r| r.iter().map(|&c| c as f64).collect()).collect();
    let basis = null_basis(&rows, e);
    let sg0 = if t.shared > 0 { 0.5 * alpha[0].min(alpha[1]) } else { 0.0 };
    let mut x: Vec<f64> = kinds
        .iter()
        .map(|k| match k {
            Kind::Shared => sg0 / t.shared as f64,
            Kind::Own(p) => (alpha[*p] - sg0) / (2.0 * t.own[*p] as f64),
        })
        .collect();
    let w: Vec<f64> = kinds.iter().map(|k| if *k == Kind::Shared { rate(tau) } else { 0.0 }).collect();
    let mut rng = rng::stream(seed, 0);
    let dim = basis.len().max(1);
    let mut dir = vec![0.0; e];
    let mut step = |x: &mut Vec<f64>, rng: &mut rng::StreamRng| {
        dir.iter_mut().for_each(|v| *v = 0.0);
        for b in &basis {
            let g: f64 = rng.sample(StandardNormal);
            dir.iter_mut().zip(b).for_each(|(d, bi)| *d += g * bi);
        }
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (xi, di) in x.iter().zip(&dir) {
            if *di > 1e-14 {
                lo = lo.max(-xi / di);
            } else if *di < -1e-14 {
                hi = hi.min(-xi / di);
            }
        }
        let s = rng.gen_range(lo..hi);
        x.iter_mut().zip(&dir).for_each(|(xi, di)| *xi = (*xi + s * di).max(0.0));
    };
    for _ in 0..100 * dim {
        step(&mut x, &mut rng);
    }
    let batches = 20;
    let per = samples.div_ceil(batches).max(1);
    let mut means = Vec::with_capacity(batches);
    for _ in 0..batches {
        let mut acc = 0.0;
        for _ in 0..per {
            for _ in 0..dim {
                step(&mut x, &mut rng);
            }
            acc += (-x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>()).exp();
        }
        means.push(acc / per as f64);
    }
    let (m, se) = mean_and_stderr(&means);
    let vol = p.volume();
    Ok(Estimate { value: vol * m, stderr: vol * se })
}

/// Orthonormal basis of `{x : rows·x = 0}` by Gram–Schmidt.
fn null_basis(rows: &[Vec<f64>], e: usize) -> Vec<Vec<f64>> {
    fn reduce(v: &mut [f64], against: &[Vec<f64>]) {
        for _ in 0..2 {
            for q in against {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
        }
    }
    fn normalize(v: &mut [f64]) -> bool {
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n < 1e-9 {
            return false;
        }
        v.iter_mut().for_each(|a| *a /= n);
        true
    }
    let mut row_space: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        reduce(&mut v, &row_space);
        if normalize(&mut v) {
            row_space.push(v);
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..e {
        let mut v = vec![0.0; e];
        v[i] = 1.0;
        reduce(&mut v, &row_space);
        reduce(&mut v, &basis);
        if normalize(&mut v) {
            basis.push(v);
        }
    }
    basis
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// `(s, D_1(s))` for even `s ≤ S_MAX_K1`, from the diagram generator.
pub fn diagram_counts_k1() -> &'static [(usize, u64)] {
    static COUNTS: OnceLock<Vec<(usize, u64)>> = OnceLock::new();
    COUNTS.get_or_init(|| {
        (2..=S_MAX_K1)
            .step_by(2)
            .map(|s| (s, generate_diagrams(s, 1).expect("within generation cap").len() as u64))
            .collect()
    })
}

/// Connected two-circuit diagrams grouped by `(s, edge types)` with their
/// multiplicities, for `s ≤ S_MAX_K2`.
pub fn connected_types_k2() -> &'static [(usize, EdgeTypes, u64)] {
    static TYPES: OnceLock<Vec<(usize, EdgeTypes, u64)>> = OnceLock::new();
    TYPES.get_or_init(|| {
        let mut out: std::collections::BTreeMap<(usize, EdgeTypes), u64> = Default::default();
        for s in (2..=S_MAX_K2).step_by(2) {
            for d in generate_diagrams(s, 2).expect("within generation cap") {
                if d.components() == 1 {
                    *out.entry((s, EdgeTypes::of(&d).expect("two-circuit edge types"))).or_default() += 1;
                }
            }
        }
        out.into_iter().map(|((s, t), n)| (s, t, n)).collect()
    })
}

/// A truncated series with the size of what was cut off. `rigorous` says
/// whether `tail` is a proven bound or an extrapolated estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail: f64,
    pub rigorous: bool,
    pub s_max: usize,
}

fn check_s_max(s_max: usize, cap: usize) -> Result<()> {
    if s_max < 2 || s_max > cap {
        return Err(Error::OutOfRange(format!("s_max must lie in 2..={cap}")));
    }
    Ok(())
}

/// Terms `½ D(s) (α/2)^{3s−2}/(3s−2)!` for `s = 2, 4, …, s_max`.
pub fn psi1_terms(alpha: f64, s_max: usize) -> Vec<f64> {
    diagram_counts_k1()
        .iter()
        .filter(|(s, _)| *s <= s_max)
        .map(|&(s, d)| 0.5 * d as f64 * simplex(alpha / 2.0, 3 * s - 1))
        .collect()
}

/// `Σ_{s > s_max} ½ C^{s−1} s^s (α/2)^{3s−2}/(3s−2)!`.
fn psi1_tail_bound(alpha: f64, s_max: usize, c: f64) -> f64 {
    if alpha <= 0.0 {
        return 0.0;
    }
    sum_log_terms(s_max + 2, |s| {
        let s_f = s as f64;
        (s_f - 1.0) * c.ln() + s_f * s_f.ln() + (3.0 * s_f - 2.0) * (alpha / 2.0).ln() - ln_factorial(3 * s - 2) - 2f64.ln()
    })
}

/// Sums `exp(log_term(s))` over even `s ≥ start` until the terms are
/// negligible and decreasing; infinite if they never settle.
fn sum_log_terms(start: usize, log_term: impl Fn(usize) -> f64) -> f64 {
    let mut total = 0.0;
    let mut prev = f64::INFINITY;
    let mut s = start;
    while s < 4000 {
        let t = log_term(s).exp();
        total += t;
        if t < prev && (t <= 1e-18 * total || t < 1e-300) {
            return total;
        }
        prev = t;
        s += 2;
    }
    f64::INFINITY
}

/// One-circuit `ψ(α, 0)`. Fails if the tail bound exceeds `tol` relative
/// to the value.
pub fn psi1(alpha: f64, s_max: usize, tol: f64) -> Result<SeriesValue> {
    check_s_max(s_max, S_MAX_K1)?;
    if alpha < 0.0 {
        return Err(Error::OutOfRange("alpha must be non-negative".into()));
    }
    let value: f64 = psi1_terms(alpha, s_max).iter().sum();
    let tail = psi1_tail_bound(alpha, s_max, TAIL_CONSTANT);
    if tail > tol * value && tail > 0.0 {
        return Err(Error::TailBound { bound: tail, tol: tol * value });
    }
    Ok(SeriesValue { value, tail, rigorous: true, s_max })
}

/// Connected two-circuit part `½ Σ_{connected D} I^D(x̄, Δ)`, split by `s`.
struct ConnectedKernel {
    /// `(s/2 − 1, own1, own2, shared, multiplicity)`
    types: Vec<(usize, usize, usize, usize, f64)>,
    levels: usize,
    rule: Rule,
}

impl ConnectedKernel {
    fn new(s_max: usize) -> Self {
        let types = connected_types_k2()
            .iter()
            .filter(|(s, _, _)| *s <= s_max)
            .map(|&(s, t, n)| (s / 2 - 1, t.own[0], t.own[1], t.shared, n as f64))
            .collect();
        ConnectedKernel { types, levels: s_max / 2, rule: Rule::new(12) }
    }

    fn eval(&self, x1: f64, x2: f64, rate: f64) -> Vec<f64> {
        const DEG: usize = 3 * S_MAX_K2;
        let mut out = vec![0.0; self.levels];
        let top = x1.min(x2);
        if top > 0.0 {
            let mut pw = [[0.0; DEG + 1]; 3];
            for (sg, w) in self.rule.panel_points(0.0, top, 4) {
                for (table, x) in pw.iter_mut().zip([sg, (x1 - sg) / 2.0, (x2 - sg) / 2.0]) {
                    table[1] = 1.0;
                    for j in 2..=DEG {
                        table[j] = table[j - 1] * x / (j - 1) as f64;
                    }
                }
                let weight = w * (-rate * sg).exp();
                for &(lvl, a, b, c, n) in &self.types {
                    if a > 0 && b > 0 {
                        out[lvl] += weight * n * pw[0][c] * pw[1][a] * pw[2][b];
                    }
                }
            }
            // ½ from the lattice normalization, ½ from the defining relation
            out.iter_mut().for_each(|v| *v *= 0.25);
        }
        for &(lvl, a, b, c, n) in &self.types {
            if a == 0 || b == 0 {
                let t = EdgeTypes { k: 2, own: [a, b], shared: c };
                out[lvl] += 0.5 * n * t.integral(&[x1, x2], rate);
            }
        }
        out
    }
}

/// Geometric extrapolation of the next level from the last two.
fn extrapolated_tail(levels: &[f64]) -> f64 {
    match levels {
        [.., prev, last] if *prev > 0.0 && last < prev => last * last / prev,
        [.., _, last] => last.abs(),
        _ => f64::INFINITY,
    }
}

/// `ψ(ᾱ, τ̄)` for `k ≤ 2`. For two circuits the value is
/// `ψ(α_1)ψ(α_2) + ½ Σ_{connected D} I^D`, which is what the defining
/// relation leaves after removing the disconnected diagrams; its tail is an
/// extrapolation, not a bound.
pub fn psi(alpha: &[f64], tau: &[f64], s_max: usize, tol: f64) -> Result<SeriesValue> {
    if alpha.len() != tau.len() {
        return Err(Error::OutOfRange("alpha and tau lengths differ".into()));
    }
    match alpha.len() {
        0 => Ok(SeriesValue { value: 1.0, tail: 0.0, rigorous: true, s_max }),
        1 => psi1(alpha[0], s_max, tol),
        2 => {
            check_s_max(s_max, S_MAX_K2)?;
            let (p1, p2) = (psi1(alpha[0], s_max, tol)?, psi1(alpha[1], s_max, tol)?);
            let levels = ConnectedKernel::new(s_max).eval(alpha[0], alpha[1], rate(tau));
            let conn: f64 = levels.iter().sum();
            let value = p1.value * p2.value + conn;
            let tail = p1.tail * p2.value + p2.tail * p1.value + p1.tail * p2.tail + extrapolated_tail(&levels);
            if tail > tol * value && tail > 0.0 {
                return Err(Error::TailBound { bound: tail, tol: tol * value });
            }
            Ok(SeriesValue { value, tail, rigorous: false, s_max })
        }
        k => Err(Error::OutOfRange(format!("psi is implemented for k ≤ 2, got {k}"))),
    }
}

/// A value of φ with an error budget. `leading` is the product of the
/// `I = ∅` terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: f64,
    pub error: f64,
    pub leading: f64,
    /// Whether `error` is a proven bound.
    pub rigorous: bool,
}

/// `α^{−3/2}/(2√π)`, the term of φ with no diagram.
pub fn phi_leading(alpha: f64) -> f64 {
    alpha.powf(-1.5) / (2.0 * PI.sqrt())
}

fn xi_weight(alpha: f64, xi: f64) -> f64 {
    2.0 * xi * (-xi * xi).exp() / (PI * alpha).sqrt()
}

/// One-circuit φ: leading term plus the Gaussian-weighted ψ integral. The
/// error adds the series tail bound and the part of the integral beyond
/// `xi_max`.
pub fn phi1(alpha: f64, opts: &TheoryOptions) -> Result<PhiValue> {
    if !(alpha > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive".into()));
    }
    check_s_max(opts.s_max_k1, S_MAX_K1)?;
    let rule = Rule::new(opts.nodes);
    let integral: f64 = rule
        .panel_points(0.0, opts.xi_max, opts.panels)
        .into_iter()
        .map(|(xi, w)| w * xi_weight(alpha, xi) * psi1_terms(2.0 * alpha.sqrt() * xi, opts.s_max_k1).iter().sum::<f64>())
        .sum();
    let c = opts.tail_constant;
    let truncation = sum_log_terms(opts.s_max_k1 + 2, |s| {
        let s_f = s as f64;
        -(2f64.ln()) + (s_f - 1.0) * c.ln() + s_f * s_f.ln() + 1.5 * (s_f - 1.0) * alpha.ln() + ln_factorial(3 * s / 2 - 1)
            - ln_factorial(3 * s - 2)
            - 0.5 * PI.ln()
    });
    let x = opts.xi_max * opts.xi_max;
    let beyond: f64 = diagram_counts_k1()
        .iter()
        .filter(|(s, _)| *s <= opts.s_max_k1)
        .map(|&(s, d)| {
            let a = 1.5 * s as f64;
            let upper_gamma = if x > a - 1.0 { x.powf(a - 1.0) * (-x).exp() / (1.0 - (a - 1.0) / x) } else { f64::INFINITY };
            0.5 * d as f64 * (1.5 * (s as f64 - 1.0) * alpha.ln() - ln_factorial(3 * s - 2)).exp() / PI.sqrt() * upper_gamma
        })
        .sum();
    let leading = phi_leading(alpha);
    Ok(PhiValue { value: leading + integral, error: truncation + beyond, leading, rigorous: true })
}

/// Connected part of the two-circuit φ, split by `s`.
pub fn phi_connected_levels(alpha: [f64; 2], gap: f64, opts: &TheoryOptions) -> Result<Vec<f64>> {
    if !(alpha[0] > 0.0 && alpha[1] > 0.0) {
        return Err(Error::OutOfRange("alpha must be positive".into()));
    }
    check_s_max(opts.s_max_k2, S_MAX_K2)?;
    let kernel = ConnectedKernel::new(opts.s_max_k2);
    let pts = Rule::new(opts.nodes).panel_points(0.0, opts.xi_max, opts.panels);
    let mut levels = vec![0.0; kernel.levels];
    for &(xi1, w1) in &pts {
        let f1 = w1 * xi_weight(alpha[0], xi1);
        let x1 = 2.0 * alpha[0].sqrt() * xi1;
        for &(xi2, w2) in &pts {
            let f = f1 * w2 * xi_weight(alpha[1], xi2);
            let v = kernel.eval(x1, 2.0 * alpha[1].sqrt() * xi2, gap);
            levels.iter_mut().zip(v).for_each(|(l, v)| *l += f * v);
        }
    }
    Ok(levels)
}

/// `φ(ᾱ, τ̄)` for `k ≤ 2`, with `φ(∅, ∅) = 1`.
pub fn phi(alpha: &[f64], tau: &[f64], opts: &TheoryOptions) -> Result<PhiValue> {
    if alpha.len() != tau.len() {
        return Err(Error::OutOfRange("alpha and tau lengths differ".into()));
    }
    match alpha.len() {
        0 => Ok(PhiValue { value: 1.0, error: 0.0, leading: 1.0, rigorous: true }),
        1 => phi1(alpha[0], opts),
        2 => {
            let (a, b) = (phi1(alpha[0], opts)?, phi1(alpha[1], opts)?);
            let levels = phi_connected_levels([alpha[0], alpha[1]], rate(tau), opts)?;
            let conn: f64 = levels.iter().sum();
            Ok(PhiValue {
                value: a.value * b.value + conn,
                error: a.error * b.value + b.error * a.value + a.error * b.error + extrapolated_tail(&levels),
                leading: a.leading * b.leading,
                rigorous: false,
            })
        }
        k => Err(Error::OutOfRange(format!("phi is implemented for k ≤ 2, got {k}"))),
    }
}

/// `Σ_{I ⊆ {1..k}} φ(ᾱ|_I, τ̄|_I) φ(ᾱ|_{I^c}, τ̄|_{I^c})`, the limit of the
/// two-family Laplace functional with even parities.
pub fn laplace_prediction(alpha: &[f64], tau: &[f64], opts: &TheoryOptions) -> Result<PhiValue> {
    let k = alpha.len();
    if k != tau.len() || k > 2 {
        return Err(Error::OutOfRange("prediction needs matching alpha and tau with k ≤ 2".into()));
    }
    let mut total = PhiValue { value: 0.0, error: 0.0, leading: 0.0, rigorous: true };
    for mask in 0..1usize << k {
        let pick = |inside: bool| -> (Vec<f64>, Vec<f64>) {
            (0..k).filter(|p| (mask >> p & 1 == 1) == inside).map(|p| (alpha[p], tau[p])).unzip()
        };
        let ((a1, t1), (a2, t2)) = (pick(true), pick(false));
        let (x, y) = (phi(&a1, &t1, opts)?, phi(&a2, &t2, opts)?);
        total.value += x.value * y.value;
        total.error += x.error * y.value + y.error * x.value + x.error * y.error;
        total.leading += x.leading * y.leading;
        total.rigorous &= x.rigorous && y.rigorous;
    }
    Ok(total)
}

/// Which lines enter the empirical Laplace sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    /// `Σ_j exp(α x_j)` over the top family only.
    Top,
    /// Top family plus the primed family, the latter signed by parity.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Mean over samples of the largest change the floor truncation can
    /// cause, given the lines recorded below the floor.
    pub floor_bias: f64,
}

fn grid_index(grid: &[f64], tau: f64) -> Result<usize> {
    grid.iter()
        .position(|&g| (g - tau).abs() < 1e-9)
        .ok_or_else(|| Error::OutOfRange(format!("tau = {tau} is not on the sample grid {grid:?}")))
}

/// Sample mean of `∏_p Σ_j exp(α_p x_j(τ_p))` (plus `(−1)^{r_p}` times the
/// primed sums for [`Functional::Both`]) with its standard error.
pub fn empirical_laplace(
    samples: &[EdgeProcessSample],
    alpha: &[f64],
    tau: &[f64],
    functional: Functional,
    odd: &[bool],
    floor: f64,
) -> Result<LaplaceEstimate> {
    let first = samples.first().ok_or_else(|| Error::OutOfRange("no samples".into()))?;
    if alpha.len() != tau.len() || (functional == Functional::Both && odd.len() != alpha.len()) {
        return Err(Error::OutOfRange("alpha, tau and parity lengths differ".into()));
    }
    if samples.iter().any(|s| s.n != first.n || s.flavor != first.flavor || s.tau_grid != first.tau_grid) {
        return Err(Error::OutOfRange("samples come from different campaigns".into()));
    }
    let idx = tau.iter().map(|&t| grid_index(&first.tau_grid, t)).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(samples.len());
    let mut bias = 0.0;
    for s in samples {
        let mut prod = 1.0;
        let mut padded = 1.0;
        for (p, &g) in idx.iter().enumerate() {
            let mut sum = 0.0;
            let mut dropped = 0usize;
            let mut add = |xs: &[f64], sign: f64| {
                for &x in xs {
                    if x >= -floor {
                        sum += sign * (alpha[p] * x).exp();
                    } else {
                        dropped += 1;
                    }
                }
            };
            add(&s.lines[g], 1.0);
            if functional == Functional::Both {
                add(&s.primed[g], if odd[p] { -1.0 } else { 1.0 });
            }
            prod *= sum;
            padded *= sum.abs() + dropped as f64 * (-alpha[p] * floor).exp();
        }
        bias += padded - prod.abs();
        values.push(prod);
    }
    let (estimate, stderr) = mean_and_stderr(&values);
    Ok(LaplaceEstimate { estimate, stderr, samples: values.len(), floor_bias: bias / values.len() as f64 })
}
