//! The polynomials `P_l^n`, their Chebyshev-U form and the Snyder expansion.
//!
//! `P_0 = 1`, `P_1 = x`, `P_2 = x² − n`, `P_l = x·P_{l−1} − (n−1)·P_{l−2}`.
//!
//! The U-side is kept radical-free through the scaled polynomials
//! `V_l(x) = (n−1)^{l/2}·U_l(x / (2√(n−1)))`, which have integer
//! coefficients. In these terms `P_l = V_l − V_{l−2}` and
//! `V_l = Σ_k P_{l−2k}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::Rule;

/// Monic integer polynomial, `coeffs[k]` multiplying `x^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySpec {
    pub l: usize,
    pub n: i64,
    pub coeffs: Vec<BigInt>,
}

fn shift_mul_x(c: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    out.extend_from_slice(c);
    out
}

fn sub_scaled(a: &mut Vec<BigInt>, b: &[BigInt], s: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y * s;
    }
}

fn add_into(a: &mut Vec<BigInt>, b: &[BigInt]) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

#[cfg(not(feature = "fault-injection"))]
fn recursion_coefficient(n: i64) -> i64 {
    n - 1
}

// Deliberately wrong recursion for mutation testing of the verify suite.
#[cfg(feature = "fault-injection")]
fn recursion_coefficient(n: i64) -> i64 {
    n
}

/// `P_l^n` by the three-term recursion.
pub fn p_poly(l: usize, n: i64) -> PolySpec {
    let one = vec![BigInt::one()];
    let x = vec![BigInt::zero(), BigInt::one()];
    let coeffs = match l {
        0 => one,
        1 => x,
        _ => {
            let mut prev = x.clone();
            let mut cur = vec![BigInt::from(-n), BigInt::zero(), BigInt::one()];
            let s = BigInt::from(recursion_coefficient(n));
            for _ in 3..=l {
                let mut next = shift_mul_x(&cur);
                sub_scaled(&mut next, &prev, &s);
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
    };
    PolySpec { l, n, coeffs: trim(coeffs) }
}

/// `V_l(x) = Σ_i (−1)^i C(l−i, i) (n−1)^i x^{l−2i}`.
pub fn v_poly(l: usize, n: i64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); l + 1];
    let q = BigInt::from(n - 1);
    for i in 0..=l / 2 {
        let b = BigInt::from(binomial(l - i, i));
        let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        c[l - 2 * i] = sign * b * num_traits::pow(q.clone(), i);
    }
    c
}

/// `P_l` rebuilt from the U side: `V_l − V_{l−2}`.
pub fn p_from_u(l: usize, n: i64) -> Vec<BigInt> {
    let mut c = v_poly(l, n);
    if l >= 2 {
        sub_scaled(&mut c, &v_poly(l - 2, n), &BigInt::one());
    }
    trim(c)
}

/// `V_l` rebuilt from the P side: `Σ_{k ≤ l/2} P_{l−2k}`.
pub fn u_from_p(l: usize, n: i64) -> Vec<BigInt> {
    let mut c = Vec::new();
    for k in 0..=l / 2 {
        add_into(&mut c, &p_poly(l - 2 * k, n).coeffs);
    }
    trim(c)
}

/// Coefficients of `U_l(y)` in `y`.
pub fn chebyshev_u(l: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); l + 1];
    for i in 0..=l / 2 {
        let b = BigInt::from(binomial(l - i, i)) * num_traits::pow(BigInt::from(2), l - 2 * i);
        c[l - 2 * i] = if i % 2 == 0 { b } else { -b };
    }
    c
}

/// Weights of `λ^r = Σ_m w_m U_{deg_m}(λ)`, returned as `(degree, weight)`.
pub fn snyder_expand(r: usize) -> Result<Vec<(usize, BigRational)>> {
    if r == 0 {
        return Err(Error::OutOfRange("power must be at least 1".into()));
    }
    let h = r.div_ceil(2);
    let mut out = Vec::new();
    if r % 2 == 0 {
        let den = BigInt::from(2 * h + 1) * num_traits::pow(BigInt::from(2), 2 * h);
        for m in 0..=h {
            let num = BigInt::from(2 * m + 1) * BigInt::from(binomial(2 * h + 1, h - m));
            out.push((2 * m, BigRational::new(num, den.clone())));
        }
    } else {
        let den = BigInt::from(2 * h) * num_traits::pow(BigInt::from(2), 2 * h - 1);
        for m in 1..=h {
            let num = BigInt::from(2 * m) * BigInt::from(binomial(2 * h, h - m));
            out.push((2 * m - 1, BigRational::new(num, den.clone())));
        }
    }
    Ok(out)
}

pub fn eval_f64(coeffs: &[BigInt], x: f64) -> f64 {
    use num_traits::ToPrimitive;
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap())
}

/// `P_l^n(x)` in floating point via the recursion.
pub fn p_eval(l: usize, n: i64, x: f64) -> f64 {
    let n = n as f64;
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut a, mut b) = (x, x * x - n);
            for _ in 3..=l {
                let c = x * b - (n - 1.0) * a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Density of the Kesten–McKay law for parameter `n`.
pub fn kesten_mckay_density(n: i64, x: f64) -> f64 {
    let n = n as f64;
    let r = 4.0 * (n - 1.0) - x * x;
    if r <= 0.0 {
        return 0.0;
    }
    n / (2.0 * PI) * r.sqrt() / (n * n - x * x)
}

/// Number of Gauss–Legendre nodes used for Kesten–McKay inner products.
pub const KM_NODES: usize = 2000;
pub const KM_TOLERANCE: f64 = 1e-10;

fn km_integral(rule: &Rule, l1: usize, l2: usize, n: i64) -> f64 {
    let nf = n as f64;
    let a = 2.0 * (nf - 1.0).sqrt();
    // x = a sin θ removes the square-root endpoint behaviour
    rule.integrate(-PI / 2.0, PI / 2.0, |th| {
        let x = a * th.sin();
        let c = th.cos();
        let w = nf / (2.0 * PI) * a * a * c * c / (nf * nf - x * x);
        p_eval(l1, n, x) * p_eval(l2, n, x) * w
    })
}

/// `∫ P_{l1} P_{l2} dKM_n`.
pub fn kesten_mckay_gram(l1: usize, l2: usize, n: i64) -> Result<f64> {
    if l1 > 12 || l2 > 12 || n < 3 {
        return Err(Error::OutOfRange("need l ≤ 12 and n ≥ 3".into()));
    }
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    let (fine_rule, coarse_rule) = RULES.get_or_init(|| (Rule::new(KM_NODES), Rule::new(KM_NODES / 2)));
    let fine = km_integral(fine_rule, l1, l2, n);
    let coarse = km_integral(coarse_rule, l1, l2, n);
    let scale = km_norm(l1.max(l2), n).max(1.0);
    if (fine - coarse).abs() > KM_TOLERANCE * scale {
        return Err(Error::Quadrature(format!("KM gram ({l1},{l2},{n}): {fine} vs {coarse}")));
    }
    Ok(fine)
}

/// Gram entry divided by `‖P_{l1}‖·‖P_{l2}‖`.
pub fn kesten_mckay_correlation(l1: usize, l2: usize, n: i64) -> Result<f64> {
    Ok(kesten_mckay_gram(l1, l2, n)? / (km_norm(l1, n) * km_norm(l2, n)).sqrt())
}

/// `‖P_l‖² = n(n−1)^{l−1}` for `l ≥ 1`, from the recursion coefficients.
pub fn km_norm(l: usize, n: i64) -> f64 {
    if l == 0 {
        1.0
    } else {
        n as f64 * ((n - 1) as f64).powi(l as i32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rational_poly_mul_const(c: &[BigInt], w: &BigRational) -> Vec<BigRational> {
        c.iter().map(|x| BigRational::from_integer(x.clone()) * w).collect()
    }

    #[test]
    fn base_cases() {
        assert_eq!(p_poly(0, 5).coeffs, ints(&[1]));
        assert_eq!(p_poly(1, 5).coeffs, ints(&[0, 1]));
        assert_eq!(p_poly(2, 5).coeffs, ints(&[-5, 0, 1]));
        for n in 1..10 {
            assert_eq!(p_poly(3, n).coeffs, ints(&[0, -(2 * n - 1), 0, 1]));
        }
    }

    #[test]
    fn u_relations_hold_exactly() {
        for n in 1..=20 {
            for l in 0..=12 {
                let p = p_poly(l, n).coeffs;
                assert_eq!(p_from_u(l, n), p, "l={l} n={n}");
                assert_eq!(u_from_p(l, n), trim(v_poly(l, n)), "l={l} n={n}");
                assert_eq!(p.len(), l + 1);
                assert!(p.last().unwrap().is_one());
                assert!(p.iter().enumerate().all(|(k, c)| (k + l) % 2 == 0 || c.is_zero()));
            }
        }
    }

    #[test]
    fn round_trip_l4_n7() {
        // P_4 = V_4 − V_2 and V_4 = P_4 + P_2 + P_0
        let mut back = p_from_u(4, 7);
        add_into(&mut back, &p_from_u(2, 7));
        add_into(&mut back, &p_from_u(0, 7));
        assert_eq!(trim(back), u_from_p(4, 7));
    }

    #[test]
    fn snyder_identities_symbolic() {
        for r in 1..=12 {
            let mut sum = vec![BigRational::zero(); r + 1];
            for (deg, w) in snyder_expand(r).unwrap() {
                assert!(w >= BigRational::zero());
                assert_eq!((deg + r) % 2, 0);
                for (k, c) in rational_poly_mul_const(&chebyshev_u(deg), &w).into_iter().enumerate() {
                    sum[k] += c;
                }
            }
            let mut expect = vec![BigRational::zero(); r + 1];
            expect[r] = BigRational::one();
            assert_eq!(sum, expect, "r={r}");
            let at_one: BigRational = snyder_expand(r)
                .unwrap()
                .into_iter()
                .map(|(d, w)| w * BigRational::from_integer(BigInt::from(d + 1)))
                .sum();
            assert!(at_one.is_one());
        }
    }

    #[test]
    fn snyder_small_cases() {
        let w = snyder_expand(1).unwrap();
        assert_eq!(w, vec![(1, BigRational::new(1.into(), 2.into()))]);
        let w = snyder_expand(2).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0], (0, BigRational::new(3.into(), 12.into())));
    }

    #[test]
    fn snyder_numeric_r6() {
        let w = snyder_expand(6).unwrap();
        for i in 0..20 {
            let lam = -1.0 + 2.0 * i as f64 / 19.0;
            let v: f64 = w
                .iter()
                .map(|(d, w)| {
                    use num_traits::ToPrimitive;
                    w.to_f64().unwrap() * eval_f64(&chebyshev_u(*d), lam)
                })
                .sum();
            assert!((v - lam.powi(6)).abs() < 1e-12);
        }
    }

    #[test]
    fn km_examples() {
        assert!(kesten_mckay_gram(0, 1, 5).unwrap().abs() < 1e-8);
        assert!(kesten_mckay_gram(1, 1, 5).unwrap() > 0.0);
        assert!(kesten_mckay_gram(2, 3, 9).unwrap().abs() < 1e-8);
        assert!((kesten_mckay_gram(0, 0, 4).unwrap() - 1.0).abs() < 1e-10);
        assert!(kesten_mckay_gram(1, 1, 2).is_err());
    }

    #[test]
    fn km_gram_is_diagonal() {
        for n in [3, 5, 9, 20] {
            for a in 0..=8 {
                for b in 0..=8 {
                    let g = kesten_mckay_gram(a, b, n).unwrap();
                    let scale = (km_norm(a, n) * km_norm(b, n)).sqrt();
                    if a == b {
                        assert!((g / scale - 1.0).abs() < 1e-8, "({a},{b},{n}) {g}");
                    } else {
                        assert!(g.abs() < 1e-8 * scale, "({a},{b},{n}) {g}");
                    }
                }
            }
        }
    }
}
