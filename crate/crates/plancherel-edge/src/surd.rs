//! Exact numbers of the form `q·√r` with rational `q` and `r ≥ 0`.
//!
//! Moment normalizations carry half-integer powers of `n_p`; keeping the
//! radical separate lets two evaluation routes be compared exactly.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct Surd {
    pub coeff: BigRational,
    pub radicand: BigRational,
}

impl Surd {
    pub fn rational(q: BigRational) -> Self {
        Surd { coeff: q, radicand: BigRational::one() }
    }

    pub fn sqrt_of(r: BigRational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        Surd { coeff: BigRational::one(), radicand: r }
    }

    /// `x^(e/2)` for a positive integer `x` and any integer `e`.
    pub fn half_power(x: u64, e: i64) -> Self {
        let base = BigRational::from_integer(BigInt::from(x));
        let whole = pow_i(&base, e.div_euclid(2));
        if e.rem_euclid(2) == 0 {
            Surd::rational(whole)
        } else {
            Surd { coeff: whole, radicand: base }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.radicand.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

pub(crate) fn pow_i(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.coeff.signum() == other.coeff.signum()
            && &self.coeff * &self.coeff * &self.radicand == &other.coeff * &other.coeff * &other.radicand
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        Surd { coeff: self.coeff * rhs.coeff, radicand: self.radicand * rhs.radicand }
    }
}

impl Mul<BigRational> for Surd {
    type Output = Surd;
    fn mul(self, rhs: BigRational) -> Surd {
        Surd { coeff: self.coeff * rhs, radicand: self.radicand }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn equality_up_to_square_factors() {
        let a = Surd { coeff: q(1, 1), radicand: q(8, 1) };
        let b = Surd { coeff: q(2, 1), radicand: q(2, 1) };
        assert_eq!(a, b);
        assert_ne!(a, Surd { coeff: q(-2, 1), radicand: q(2, 1) });
    }

    #[test]
    fn half_powers() {
        assert_eq!(Surd::half_power(4, 3), Surd::rational(q(8, 1)));
        assert!((Surd::half_power(6, -3).to_f64() - 6f64.powf(-1.5)).abs() < 1e-15);
        assert_eq!(Surd::half_power(5, 0), Surd::rational(q(1, 1)));
    }
}
