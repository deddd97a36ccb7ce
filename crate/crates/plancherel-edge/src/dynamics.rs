//! Plancherel sampling, the decay chain and rescaled edge trajectories.
//!
//! Shapes are sampled by row insertion of a uniform permutation. Columns of
//! the same shape come from inserting the reversed word, whose insertion shape
//! is the transpose, so the top rows and top columns of a huge shape can be
//! read off without building the full tableau.
//!
//! One step of the decay chain removes the inner corner `□` with probability
//! `dim(λ−□)/dim λ`. By the hook-length formula this ratio is
//! `(1/|λ|)·∏ h/(h−1)` over the boxes sharing a row or column with `□`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest `n` for which [`enumerate_plancherel`] will list all partitions.
pub const ENUMERATION_CAP: usize = 14;
/// Largest size at which transition probabilities are computed exactly.
pub const EXACT_TRANSITION_CAP: usize = 170;
/// Allowed drift of float transition probabilities before renormalizing.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-8;
/// Default number of recorded lines per trajectory.
pub const DEFAULT_J_MAX: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Row,
    Frobenius,
    Kerov,
}

/// Row insertion of `word`, keeping at most `cap` rows. Returns row lengths.
pub fn rsk_shape(word: impl IntoIterator<Item = u32>, cap: Option<usize>) -> Vec<usize> {
    let cap = cap.unwrap_or(usize::MAX);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for mut x in word {
        let mut r = 0;
        loop {
            if r == cap {
                break;
            }
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            let pos = row.partition_point(|&y| y < x);
            if pos == row.len() {
                row.push(x);
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
            r += 1;
        }
    }
    rows.iter().map(Vec::len).collect()
}

fn uniform_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut w: Vec<u32> = (0..n as u32).collect();
    w.shuffle(rng);
    w
}

/// A Plancherel-distributed partition of `n`. With `row_cap = Some(k)` only
/// the first `k` rows are returned; they coincide with the first `k` rows of
/// the uncapped sample drawn from the same stream.
pub fn sample_plancherel<R: Rng + ?Sized>(n: usize, rng: &mut R, row_cap: Option<usize>) -> Partition {
    let w = uniform_permutation(n, rng);
    Partition::from_sorted(rsk_shape(w, row_cap))
}

/// First `cap` rows and first `cap` columns of one Plancherel sample.
pub fn sample_rows_and_columns<R: Rng + ?Sized>(n: usize, rng: &mut R, cap: usize) -> (Vec<usize>, Vec<usize>) {
    let w = uniform_permutation(n, rng);
    let rows = rsk_shape(w.iter().copied(), Some(cap));
    let cols = rsk_shape(w.iter().rev().copied(), Some(cap));
    (rows, cols)
}

/// Exact Plancherel measure `dim²λ/n!` on all partitions of `n`.
pub fn enumerate_plancherel(n: usize) -> Result<BTreeMap<Partition, BigRational>> {
    if n > ENUMERATION_CAP {
        return Err(Error::OutOfRange(format!("enumeration capped at n = {ENUMERATION_CAP}")));
    }
    let fact: BigUint = (1..=n).map(BigUint::from).product();
    let fact = BigInt::from(fact);
    Ok(Partition::all_of_size(n)
        .into_iter()
        .map(|l| {
            let d = BigInt::from(l.dimension());
            (l, BigRational::new(&d * &d, fact.clone()))
        })
        .collect())
}

/// Hook factors of the boxes sharing a row or column with the inner corner
/// in row `i`, as (h, h−1) pairs. `rows`/`cols` are 0-based slices.
fn removal_hooks<'a>(rows: &'a [usize], cols: &'a [usize], i: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
    let c = rows[i - 1];
    let along_row = (1..c).map(move |j| {
        let h = c - j + cols[j - 1] - i + 1;
        (h, h - 1)
    });
    let along_col = (1..i).map(move |r| {
        let h = rows[r - 1] - c + i - r + 1;
        (h, h - 1)
    });
    along_row.chain(along_col)
}

/// Hook factors of the boxes sharing a row or column with the new box at
/// row `i` in `λ+□`, as (h−1, h) pairs.
fn addition_hooks<'a>(rows: &'a [usize], cols: &'a [usize], i: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
    let c = rows.get(i - 1).copied().unwrap_or(0) + 1;
    let along_row = (1..c).map(move |j| {
        let h = c - j + cols[j - 1] - i + 1;
        (h - 1, h)
    });
    let along_col = (1..i).map(move |r| {
        let h = rows[r - 1] - c + i - r + 1;
        (h - 1, h)
    });
    along_row.chain(along_col)
}

fn ratio_exact(factors: impl Iterator<Item = (usize, usize)>, extra_den: usize) -> BigRational {
    let mut num = BigUint::one();
    let mut den = BigUint::from(extra_den);
    for (a, b) in factors {
        num *= a;
        den *= b;
    }
    BigRational::new(num.into(), den.into())
}

fn ratio_float(factors: impl Iterator<Item = (usize, usize)>, extra_den: usize) -> f64 {
    factors.fold(1.0 / extra_den as f64, |acc, (a, b)| acc * a as f64 / b as f64)
}

/// Exact removal probabilities, keyed by the row of the inner corner.
pub fn decay_probabilities_exact(lambda: &Partition) -> Result<Vec<(usize, BigRational)>> {
    if lambda.is_empty() {
        return Err(Error::OutOfRange("cannot decay the empty partition".into()));
    }
    let (rows, cols) = (lambda.parts(), lambda.conjugate_parts());
    Ok(lambda
        .inner_corner_rows()
        .into_iter()
        .map(|i| (i, ratio_exact(removal_hooks(rows, cols, i), lambda.size())))
        .collect())
}

fn normalize(mut probs: Vec<(usize, f64)>) -> Result<Vec<(usize, f64)>> {
    let total: f64 = probs.iter().map(|p| p.1).sum();
    if (total - 1.0).abs() >= RENORMALIZE_TOLERANCE {
        return Err(Error::ProbabilityDrift(total));
    }
    for p in &mut probs {
        p.1 /= total;
    }
    Ok(probs)
}

fn decay_probabilities_slices(rows: &[usize], cols: &[usize], size: usize, out: &mut Vec<(usize, f64)>) -> Result<()> {
    out.clear();
    let mut total = 0.0;
    for i in 1..=rows.len() {
        if rows[i - 1] > rows.get(i).copied().unwrap_or(0) {
            let p = ratio_float(removal_hooks(rows, cols, i), size);
            total += p;
            out.push((i, p));
        }
    }
    if (total - 1.0).abs() >= RENORMALIZE_TOLERANCE {
        return Err(Error::ProbabilityDrift(total));
    }
    for p in out.iter_mut() {
        p.1 /= total;
    }
    Ok(())
}

/// Removal probabilities in floating point.
pub fn decay_probabilities(lambda: &Partition) -> Result<Vec<(usize, f64)>> {
    if lambda.is_empty() {
        return Err(Error::OutOfRange("cannot decay the empty partition".into()));
    }
    if lambda.size() <= EXACT_TRANSITION_CAP {
        let exact = decay_probabilities_exact(lambda)?;
        return Ok(exact.into_iter().map(|(i, p)| (i, p.to_f64().unwrap())).collect());
    }
    let mut out = Vec::new();
    decay_probabilities_slices(lambda.parts(), lambda.conjugate_parts(), lambda.size(), &mut out)?;
    Ok(out)
}

/// Exact addition probabilities `dim(λ+□)/((m+1)·dim λ)`, keyed by row.
pub fn growth_probabilities_exact(lambda: &Partition) -> Vec<(usize, BigRational)> {
    let (rows, cols) = (lambda.parts(), lambda.conjugate_parts());
    lambda
        .outer_corner_rows()
        .into_iter()
        .map(|i| (i, ratio_exact(addition_hooks(rows, cols, i), 1)))
        .collect()
}

pub fn growth_probabilities(lambda: &Partition) -> Result<Vec<(usize, f64)>> {
    if lambda.size() < EXACT_TRANSITION_CAP {
        return Ok(growth_probabilities_exact(lambda).into_iter().map(|(i, p)| (i, p.to_f64().unwrap())).collect());
    }
    let (rows, cols) = (lambda.parts(), lambda.conjugate_parts());
    normalize(lambda.outer_corner_rows().into_iter().map(|i| (i, ratio_float(addition_hooks(rows, cols, i), 1))).collect())
}

fn pick<R: Rng + ?Sized>(probs: &[(usize, f64)], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for &(i, p) in probs {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.last().expect("nonempty distribution").0
}

/// One step of the decay chain.
pub fn decay_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Result<Partition> {
    let probs = decay_probabilities(lambda)?;
    lambda.remove_corner(pick(&probs, rng))
}

/// One step of the reversed (growth) chain.
pub fn growth_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Result<Partition> {
    let probs = growth_probabilities(lambda)?;
    lambda.add_corner(pick(&probs, rng))
}

/// Mutable shape used to run long stretches of the decay chain.
#[derive(Clone, Debug)]
pub struct DecayState {
    rows: Vec<usize>,
    cols: Vec<usize>,
    size: usize,
    scratch: Vec<(usize, f64)>,
}

impl DecayState {
    pub fn new(lambda: &Partition) -> Self {
        DecayState {
            rows: lambda.parts().to_vec(),
            cols: lambda.conjugate_parts().to_vec(),
            size: lambda.size(),
            scratch: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_sorted(self.rows.clone())
    }

    /// Removes one corner; returns its row.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<usize> {
        if self.size == 0 {
            return Err(Error::OutOfRange("cannot decay the empty partition".into()));
        }
        let i = if self.size <= EXACT_TRANSITION_CAP {
            let probs = decay_probabilities(&self.to_partition())?;
            pick(&probs, rng)
        } else {
            let mut scratch = std::mem::take(&mut self.scratch);
            decay_probabilities_slices(&self.rows, &self.cols, self.size, &mut scratch)?;
            let i = pick(&scratch, rng);
            self.scratch = scratch;
            i
        };
        let c = self.rows[i - 1];
        self.rows[i - 1] -= 1;
        if self.rows[i - 1] == 0 {
            self.rows.pop();
        }
        self.cols[c - 1] -= 1;
        if self.cols[c - 1] == 0 {
            self.cols.pop();
        }
        self.size -= 1;
        Ok(i)
    }
}

/// `t^n(τ) = round(2τ n^{5/6})`.
pub fn decay_time(n: usize, tau: f64) -> usize {
    (2.0 * tau * (n as f64).powf(5.0 / 6.0)).round() as usize
}

/// Unscaled edge coordinates of a shape in the given flavor: the top family
/// and the primed family (the same coordinates of the conjugate).
pub fn edge_coordinates(rows: &[usize], cols: &[usize], flavor: Flavor, j_max: usize) -> (Vec<i64>, Vec<i64>) {
    fn side(rows: &[usize], other: &[usize], flavor: Flavor, j_max: usize) -> Vec<i64> {
        match flavor {
            Flavor::Row => rows.iter().take(j_max).map(|&r| r as i64).collect(),
            Flavor::Frobenius => rows
                .iter()
                .enumerate()
                .take(j_max)
                .take_while(|(j, &r)| r > *j)
                .map(|(j, &r)| r as i64 - (j as i64 + 1))
                .collect(),
            Flavor::Kerov => {
                // inner corners among the known rows; the last known row only
                // counts when the shape is known to end there
                let known = rows.len();
                let complete = other.first().is_some_and(|&h| h == known);
                (1..=known)
                    .filter(|&i| {
                        let next = rows.get(i).copied().unwrap_or(0);
                        rows[i - 1] > next && (i < known || complete)
                    })
                    .map(|i| rows[i - 1] as i64 - i as i64)
                    .take(j_max)
                    .collect()
            }
        }
    }
    (side(rows, cols, flavor, j_max), side(cols, rows, flavor, j_max))
}

/// Rescaled coordinates `n^{−1/6}(Λ − 2√m)` where `m` is the current size.
fn rescale(raw: &[i64], n: usize, m: usize) -> Vec<f64> {
    let s = (n as f64).powf(-1.0 / 6.0);
    let c = 2.0 * (m as f64).sqrt();
    raw.iter().map(|&v| s * (v as f64 - c)).collect()
}

/// A rescaled line-ensemble trajectory on a τ-grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeProcessSample {
    pub n: usize,
    pub flavor: Flavor,
    pub tau_grid: Vec<f64>,
    /// Decay times `t^n(τ)` of the grid points.
    pub times: Vec<usize>,
    /// `lines[g][j]` is `x_{j+1}(τ_g)`.
    pub lines: Vec<Vec<f64>>,
    /// Same for the primed family.
    pub primed: Vec<Vec<f64>>,
}

impl EdgeProcessSample {
    /// Piecewise-linear interpolation in `t` between grid points; constant
    /// outside the grid and once the chain would pass `t = n`. Returns
    /// `None` if line `j` (0-based) is missing at a bracketing grid point.
    pub fn value_at(&self, j: usize, tau: f64) -> Option<f64> {
        let t = (2.0 * tau * (self.n as f64).powf(5.0 / 6.0)).min(self.n as f64);
        let times: Vec<f64> = self.times.iter().map(|&t| t as f64).collect();
        if t <= times[0] {
            return self.lines[0].get(j).copied();
        }
        let last = times.len() - 1;
        if t >= times[last] {
            return self.lines[last].get(j).copied();
        }
        let g = times.partition_point(|&s| s <= t) - 1;
        let (a, b) = (self.lines[g].get(j)?, self.lines[g + 1].get(j)?);
        let w = (t - times[g]) / (times[g + 1] - times[g]);
        Some(a + w * (b - a))
    }
}

fn validate_grid(n: usize, tau_grid: &[f64]) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if tau_grid.is_empty() || tau_grid.windows(2).any(|w| w[0] >= w[1]) || tau_grid[0] < 0.0 {
        return Err(Error::OutOfRange("tau grid must be non-empty, non-negative and increasing".into()));
    }
    let times: Vec<usize> = tau_grid.iter().map(|&t| decay_time(n, t)).collect();
    if *times.last().unwrap() > n {
        return Err(Error::OutOfRange(format!("grid needs {} decay steps but n = {n}", times.last().unwrap())));
    }
    Ok(times)
}

/// Runs the decay chain from a fresh Plancherel sample of size `n` and
/// records the top `j_max` lines (and primed lines) at each grid time.
pub fn sample_trajectory<R: Rng + ?Sized>(
    n: usize,
    tau_grid: &[f64],
    flavor: Flavor,
    j_max: usize,
    rng: &mut R,
) -> Result<EdgeProcessSample> {
    let times = validate_grid(n, tau_grid)?;
    let start = sample_plancherel(n, rng, None);
    let mut state = DecayState::new(&start);
    let mut lines = Vec::with_capacity(times.len());
    let mut primed = Vec::with_capacity(times.len());
    let mut t = 0;
    for &target in &times {
        while t < target {
            state.step(rng)?;
            t += 1;
        }
        let (a, b) = edge_coordinates(state.rows(), state.cols(), flavor, j_max);
        lines.push(rescale(&a, n, n - t));
        primed.push(rescale(&b, n, n - t));
    }
    Ok(EdgeProcessSample { n, flavor, tau_grid: tau_grid.to_vec(), times, lines, primed })
}

/// Same law as [`sample_trajectory`], using the fact that the decay chain
/// started from Plancherel is the time reversal of the growth process, which
/// is the sequence of insertion shapes of the prefixes of a uniform word.
pub fn sample_trajectory_by_prefixes<R: Rng + ?Sized>(
    n: usize,
    tau_grid: &[f64],
    flavor: Flavor,
    j_max: usize,
    rng: &mut R,
) -> Result<EdgeProcessSample> {
    let times = validate_grid(n, tau_grid)?;
    let w = uniform_permutation(n, rng);
    let mut lines = Vec::new();
    let mut primed = Vec::new();
    for &t in &times {
        let prefix = &w[..n - t];
        let rows = rsk_shape(prefix.iter().copied(), None);
        let cols = conjugate(&rows);
        let (a, b) = edge_coordinates(&rows, &cols, flavor, j_max);
        lines.push(rescale(&a, n, n - t));
        primed.push(rescale(&b, n, n - t));
    }
    Ok(EdgeProcessSample { n, flavor, tau_grid: tau_grid.to_vec(), times, lines, primed })
}

fn conjugate(rows: &[usize]) -> Vec<usize> {
    Partition::from_sorted(rows.to_vec()).conjugate_parts().to_vec()
}

/// Single-time snapshot using capped insertion for rows and columns.
/// `cap` must exceed `j_max` for the Kerov flavor to see the last corner.
pub fn sample_edge_snapshot<R: Rng + ?Sized>(n: usize, flavor: Flavor, j_max: usize, rng: &mut R) -> Result<EdgeProcessSample> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let (rows, cols) = sample_rows_and_columns(n, rng, j_max + 1);
    let (mut a, mut b) = edge_coordinates(&rows, &cols, flavor, j_max + 1);
    a.truncate(j_max);
    b.truncate(j_max);
    Ok(EdgeProcessSample {
        n,
        flavor,
        tau_grid: vec![0.0],
        times: vec![0],
        lines: vec![rescale(&a, n, n)],
        primed: vec![rescale(&b, n, n)],
    })
}

/// A batch of independent trajectories. Sample `i` is drawn from stream
/// `i` of `seed`, so any sub-range can be regenerated on its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tau_grid: Vec<f64>,
    pub flavor: Flavor,
    pub j_max: usize,
}

impl CampaignSpec {
    /// Sample `index`. A grid consisting of `τ = 0` alone uses capped
    /// insertion; other grids use the prefix construction.
    pub fn sample(&self, index: usize) -> Result<EdgeProcessSample> {
        let mut rng = crate::rng::stream(self.seed, index as u64);
        if self.tau_grid == [0.0] {
            sample_edge_snapshot(self.n, self.flavor, self.j_max, &mut rng)
        } else {
            sample_trajectory_by_prefixes(self.n, &self.tau_grid, self.flavor, self.j_max, &mut rng)
        }
    }
}

/// All samples of a campaign, in index order, computed in parallel.
pub fn run_campaign(spec: &CampaignSpec) -> Result<Vec<EdgeProcessSample>> {
    run_campaign_range(spec, 0..spec.samples)
}

pub fn run_campaign_range(spec: &CampaignSpec, range: std::ops::Range<usize>) -> Result<Vec<EdgeProcessSample>> {
    use rayon::prelude::*;
    range.into_par_iter().map(|i| spec.sample(i)).collect()
}

/// CDF of the limit density `(1/4)·arccos(|x|/2)` on [−2, 2].
pub fn limit_cdf(x: f64) -> f64 {
    fn g(x: f64) -> f64 {
        let x = x.min(2.0);
        x * (x / 2.0).acos() - (4.0 - x * x).max(0.0).sqrt() + 2.0
    }
    if x >= 0.0 {
        0.5 + g(x) / 4.0
    } else {
        0.5 - g(-x) / 4.0
    }
}

/// Total mass `π/(4√n)·2d` of the rescaled Frobenius measure.
pub fn frobenius_measure_mass(lambda: &Partition) -> f64 {
    let n = lambda.size() as f64;
    std::f64::consts::PI / (4.0 * n.sqrt()) * 2.0 * lambda.frobenius().d() as f64
}

/// Sup distance between the CDF of `(π/4√n)·Σ_j(δ_{f_j/√n} + δ_{−f'_j/√n})`
/// and the limit CDF.
pub fn limit_shape_statistic(lambda: &Partition) -> Result<f64> {
    if lambda.is_empty() {
        return Err(Error::OutOfRange("empty partition".into()));
    }
    let n = lambda.size() as f64;
    let w = std::f64::consts::PI / (4.0 * n.sqrt());
    let fr = lambda.frobenius();
    let mut pts: Vec<f64> = fr.f.iter().map(|&f| f as f64 / n.sqrt()).collect();
    pts.extend(fr.fprime.iter().map(|&f| -(f as f64) / n.sqrt()));
    pts.sort_by(f64::total_cmp);
    let mut dist: f64 = 0.0;
    let mut acc = 0.0;
    for x in pts {
        let lim = limit_cdf(x);
        dist = dist.max((acc - lim).abs());
        acc += w;
        dist = dist.max((acc - lim).abs());
    }
    dist = dist.max((acc - 1.0).abs());
    Ok(dist)
}
