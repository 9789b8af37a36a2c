//! The small coefficient-ring interface shared by the polynomial code.
//!
//! Elements of the tower carry their field context, so a ring element can
//! always produce the zero and one of its own ring (`zero_like`,
//! `one_like`). That lets polynomials and matrices stay generic over
//! p-adic numbers, residue-field elements and exact rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub trait Coeff: Clone + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    /// Zero in the ring. For inexact rings this means zero at the
    /// element's own precision.
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    fn is_one(&self) -> bool {
        self.minus(&self.one_like()).is_zero()
    }

    fn pow(&self, mut k: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            k >>= 1;
        }
        acc
    }
}

/// Coefficient rings that are fields (possibly inexact ones).
pub trait FieldCoeff: Coeff {
    fn try_inv(&self) -> Option<Self>;

    /// Pivot preference for elimination: smaller is better, `None` means the
    /// element cannot be used as a pivot. Valuations for p-adic numbers,
    /// a constant for exact fields.
    fn pivot_rank(&self) -> Option<i64>;

    fn try_div(&self, other: &Self) -> Option<Self> {
        other.try_inv().map(|i| self.times(&i))
    }
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
}

impl FieldCoeff for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn pivot_rank(&self) -> Option<i64> {
        if Zero::is_zero(self) {
            None
        } else {
            // prefer small numerators to limit coefficient growth
            Some(self.numer().abs().bits() as i64 + self.denom().bits() as i64)
        }
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(r: &BigRational, p: u64) -> Option<i64> {
    if Zero::is_zero(r) {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        k
    };
    Some(count(r.numer().clone()) - count(r.denom().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_roundtrip() {
        for s in ["0", "-3", "7/4", "-12/5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert_eq!(parse_rational("6/4").unwrap(), rat_frac(3, 2));
    }

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational_valuation(&rat_frac(-98, 5), 7), Some(2));
        assert_eq!(rational_valuation(&rat_frac(3, 49), 7), Some(-2));
        assert_eq!(rational_valuation(&rat(0), 7), None);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(rat(3).pow(5), rat(243));
        assert_eq!(rat(3).pow(0), rat(1));
    }
}
