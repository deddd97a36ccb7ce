//! Exact identity checks run by the `verify` subcommand.
//!
//! Every check is exact (rational or integer equality) except the
//! Kesten–McKay Gram test. A failing check carries a counterexample that can
//! be serialized into the report.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chebyshev::{chebyshev_u, kesten_mckay_correlation, p_from_u, p_poly, snyder_expand, u_from_p, v_poly};
use crate::diagrams::{brute_force_shapes, generate_diagrams, MetricDiagram};
use crate::dynamics::{decay_probabilities_exact, enumerate_plancherel, growth_probabilities_exact};
use crate::error::{Error, Result};
use crate::group_algebra::{
    all_tableau_paths, chebyshev_trace_group, jm_word_trace_group, jm_word_trace_tableau, snyder_sum_sides,
    sym_trace_group, sym_trace_tableau, y_eigenvalue, y_eigenvalue_direct, GROUP_CAP,
};
use crate::partition::Partition;
use crate::paths::{contract_lists, enumerate_sigma, SigmaVariant};

/// Largest `n` accepted by the suite.
pub const VERIFY_N_CAP: usize = GROUP_CAP;
/// Largest list or polynomial length accepted by the suite.
pub const VERIFY_M_CAP: usize = 12;
/// Group-algebra families stop here regardless of `n`; products in `S_7`
/// and above take minutes.
const ALGEBRA_N: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub family: &'static str,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub passed: bool,
    pub families: Vec<&'static str>,
    pub checks: Vec<Check>,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, family: &'static str, name: String, outcome: std::result::Result<(), Value>) {
        let (passed, counterexample) = match outcome {
            Ok(()) => (true, None),
            Err(v) => (false, Some(v)),
        };
        self.checks.push(Check { family, name, passed, counterexample });
    }

    /// Runs `body` over `items`, recording one check that fails on the first
    /// bad item.
    fn each<T: Serialize>(
        &mut self,
        family: &'static str,
        name: String,
        items: impl IntoIterator<Item = T>,
        mut body: impl FnMut(&T) -> Result<Option<Value>>,
    ) {
        let mut outcome = Ok(());
        for item in items {
            match body(&item) {
                Ok(None) => {}
                Ok(Some(detail)) => {
                    outcome = Err(json!({ "case": item, "detail": detail }));
                    break;
                }
                Err(e) => {
                    outcome = Err(json!({ "case": item, "error": e.to_string() }));
                    break;
                }
            }
        }
        self.record(family, name, outcome);
    }
}

fn mismatch<T: ToString>(a: T, b: T) -> Option<Value> {
    let (a, b) = (a.to_string(), b.to_string());
    (a != b).then(|| json!({ "left": a, "right": b }))
}

/// Parameter vectors `(m̄, t̄)` with `k ≤ 2`, entries of `m̄` in `2..=6`,
/// `Σm̄ ≤ m_total` and `t_p ∈ {0, 1}`.
fn list_parameters(m_total: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for m in 2..=6.min(m_total) {
        for t in 0..=1 {
            out.push((vec![m], vec![t]));
        }
    }
    for m1 in 2..=6 {
        for m2 in 2..=6 {
            if m1 + m2 > m_total {
                continue;
            }
            for t1 in 0..=1 {
                for t2 in 0..=1 {
                    out.push((vec![m1, m2], vec![t1, t2]));
                }
            }
        }
    }
    out
}

/// Runs every family at sizes up to `n` (capped per family) and list
/// lengths up to `m`.
pub fn run_suite(n: usize, m: usize) -> Result<Report> {
    if n > VERIFY_N_CAP || m > VERIFY_M_CAP {
        return Err(Error::OutOfRange(format!("verify caps are n ≤ {VERIFY_N_CAP}, m ≤ {VERIFY_M_CAP}")));
    }
    if n < 4 || m < 4 {
        return Err(Error::OutOfRange("verify needs n ≥ 4 and m ≥ 4".into()));
    }
    let mut s = Suite { checks: Vec::new() };
    let alg_n = n.min(ALGEBRA_N);

    for np in 4..=alg_n {
        let cases: Vec<_> = list_parameters(m.min(10))
            .into_iter()
            .filter(|(mb, tb)| tb.iter().enumerate().all(|(p, &t)| np >= t + p + 2) && mb.len() <= 2)
            .collect();
        s.each("trace_counting", format!("chebyshev trace equals |Σ′| at n = {np}"), cases, |(mb, tb)| {
            let trace = chebyshev_trace_group(mb, tb, np)?;
            let count = enumerate_sigma(mb, tb, np, SigmaVariant::NonBacktracking, false)?.count;
            Ok(mismatch(trace, BigRational::from_integer(BigInt::from(count))))
        });
    }

    let rbars: Vec<(Vec<u32>, Vec<usize>)> = (1..=4u32)
        .map(|r| (vec![r], vec![0]))
        .chain((1..=3u32).flat_map(|a| (1..=3u32).map(move |b| (vec![a, b], vec![0, 1]))))
        .collect();
    s.each("dual_route_symmetric", format!("Y-product traces, group vs tableaux, n ≤ {alg_n}"), rbars.clone(), |(rb, tb)| {
        for np in 3..=alg_n {
            if let Some(d) = mismatch(sym_trace_group(rb, tb, np)?, sym_trace_tableau(rb, tb, np)?) {
                return Ok(Some(json!({ "n": np, "values": d })));
            }
        }
        Ok(None)
    });
    s.each("dual_route_jm_words", format!("JM word traces, group vs tableaux, n ≤ {alg_n}"), rbars, |(rb, tb)| {
        for np in 3..=alg_n {
            if let Some(d) = mismatch(jm_word_trace_group(rb, tb, np)?, jm_word_trace_tableau(rb, tb, np)?) {
                return Ok(Some(json!({ "n": np, "values": d })));
            }
        }
        Ok(None)
    });

    let sizes: Vec<usize> = (2..=n.min(7)).collect();
    s.each("y_action", "Y eigenvalues on Young vectors, closed form vs contents".into(), sizes, |&np| {
        for t in all_tableau_paths(np) {
            for mm in 1..=np {
                for r in 0..=4u32 {
                    if let Some(d) = mismatch(y_eigenvalue(&t, mm, r), y_eigenvalue_direct(&t, mm, r)) {
                        return Ok(Some(json!({ "shape": t.shape().to_string(), "m": mm, "r": r, "values": d })));
                    }
                }
            }
        }
        Ok(None)
    });

    let sizes: Vec<usize> = (1..=n).collect();
    s.each("decay_stationarity", format!("decay pushes P_n to P_(n-1), n ≤ {n}"), sizes.clone(), |&np| {
        let mut pushed: BTreeMap<Partition, BigRational> = BTreeMap::new();
        for (l, pr) in enumerate_plancherel(np)? {
            for (i, t) in decay_probabilities_exact(&l)? {
                *pushed.entry(l.remove_corner(i)?).or_insert_with(BigRational::zero) += &pr * t;
            }
        }
        Ok((pushed != enumerate_plancherel(np - 1)?).then(|| json!("pushforward differs")))
    });
    s.each("growth_reversal", format!("growth pushes P_(n-1) to P_n, n ≤ {n}"), sizes.clone(), |&np| {
        let mut pushed: BTreeMap<Partition, BigRational> = BTreeMap::new();
        for (l, pr) in enumerate_plancherel(np - 1)? {
            for (i, t) in growth_probabilities_exact(&l) {
                *pushed.entry(l.add_corner(i)?).or_insert_with(BigRational::zero) += &pr * t;
            }
        }
        Ok((pushed != enumerate_plancherel(np)?).then(|| json!("pushforward differs")))
    });
    s.each("dimension_sum", format!("sum of squared dimensions is n!, n ≤ {n}"), sizes, |&np| {
        let total: num_bigint::BigUint = Partition::all_of_size(np).iter().map(|l| l.dimension().pow(2)).sum();
        let fact: num_bigint::BigUint = (1..=np as u64).product();
        Ok(mismatch(total, fact))
    });

    let grid: Vec<(usize, i64)> = (0..=m).flat_map(|l| (3..=20).map(move |q| (l, q))).collect();
    s.each("chebyshev_round_trip", format!("recursion vs U-form both ways, l ≤ {m}, n ≤ 20"), grid, |&(l, q)| {
        let rec = p_poly(l, q).coeffs;
        if let Some(d) = mismatch(format!("{rec:?}"), format!("{:?}", p_from_u(l, q))) {
            return Ok(Some(d));
        }
        Ok(mismatch(format!("{:?}", v_poly(l, q)), format!("{:?}", u_from_p(l, q))))
    });
    s.each("snyder_expansion", format!("powers in the U basis, r ≤ {m}"), (1..=m).collect::<Vec<_>>(), |&r| {
        let mut acc = vec![BigRational::zero(); r + 1];
        for (deg, w) in snyder_expand(r)? {
            for (i, c) in chebyshev_u(deg).into_iter().enumerate() {
                acc[i] += &w * BigRational::from_integer(c);
            }
        }
        let mut want = vec![BigRational::zero(); r + 1];
        want[r] = BigRational::one();
        Ok(mismatch(format!("{acc:?}"), format!("{want:?}")))
    });
    let cases: Vec<(usize, usize)> = (1..=3).flat_map(|r| (0..=1).map(move |t| (r, t))).collect();
    s.each("snyder_sum", format!("power traces vs Chebyshev traces, n = {alg_n}"), cases, |&(r, t)| {
        let (a, b) = snyder_sum_sides(r, t, alg_n)?;
        Ok(mismatch(a, b))
    });
    let pairs: Vec<(usize, usize, i64)> = (3..=20i64).flat_map(|q| (0..=m).flat_map(move |a| (0..a).map(move |b| (a, b, q)))).collect();
    s.each("kesten_mckay_orthogonality", format!("normalized off-diagonal Gram entries below 1e-8, l ≤ {m}"), pairs, |&(a, b, q)| {
        let g = kesten_mckay_correlation(a, b, q)?;
        Ok((g.abs() >= 1e-8).then(|| json!(g)))
    });

    s.each("diagram_generator", "generated shapes equal brute-force circuits".into(), vec![(2, 1), (4, 1), (2, 2)], |&(sz, k)| {
        let generated: BTreeSet<_> = generate_diagrams(sz, k)?.iter().map(MetricDiagram::shape_key).collect();
        Ok((generated != brute_force_shapes(sz, k)?).then(|| json!("shape sets differ")))
    });
    let cn = n.min(5);
    s.each("diagram_round_trip", format!("contractions of Σ′(6) at n = {cn} survive JSON and are generated"), vec![6usize], |&len| {
        let shapes: BTreeSet<_> = (2..=6).step_by(2).flat_map(|sz| generate_diagrams(sz, 1).unwrap_or_default()).map(|d| d.shape_key()).collect();
        let members = enumerate_sigma(&[len], &[0], cn, SigmaVariant::NonBacktracking, true)?.members.unwrap_or_default();
        for l in members {
            let d = contract_lists(&l)?;
            let back = MetricDiagram::from_json(&d.to_json()?)?;
            if back != d || !shapes.contains(&d.shape_key()) || d.validate().is_err() {
                return Ok(Some(json!({ "lists": l.lists() })));
            }
        }
        Ok(None)
    });

    let families: Vec<&'static str> = s.checks.iter().map(|c| c.family).collect::<BTreeSet<_>>().into_iter().collect();
    Ok(Report { passed: s.checks.iter().all(|c| c.passed), families, checks: s.checks })
}
