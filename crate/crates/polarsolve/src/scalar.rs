//! Coefficient abstraction for all exact arithmetic in this crate.
//!
//! Every algebraic structure here (polynomials, matrices, circuits) is
//! generic over an ordered field of exact scalars. The only instantiation
//! shipped by default is arbitrary-precision rationals, re-exported at the
//! crate root as [`crate::Rat`]; the trait exists so the core algorithms
//! stay independent of the concrete coefficient representation.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// An exact, totally ordered field.
///
/// `Ord`/`Eq`/`Hash` rule out approximate types: sign determination and
/// canonical term maps rely on exact comparisons.
pub trait Scalar:
    Num
    + Signed
    + Neg<Output = Self>
    + Clone
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn from_fraction(numer: i64, denom: i64) -> Self;

    /// Parse a literal of the form `a` or `a/b` (decimal integers, optional
    /// leading sign).
    fn parse_literal(text: &str) -> Option<Self>;

    /// Render as `numer/denom` with an explicit denominator, for bit-exact
    /// serialization.
    fn to_fraction_string(&self) -> String;

    /// Rescale a nonzero coefficient slice by a positive constant into a
    /// cheaper equivalent representation, when the type supports one.
    ///
    /// Positive scaling preserves zero sets and signs, which is all the
    /// callers (Sturm chains, intermediate basis elements) need. The default
    /// leaves the slice untouched.
    fn positive_rescale(_coeffs: &mut [Self]) {}
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = text.parse().ok()?;
                Some(BigRational::from_integer(n))
            }
        }
    }

    fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn positive_rescale(coeffs: &mut [Self]) {
        if coeffs.is_empty() {
            return;
        }
        // Clear denominators, then divide by the integer content. The result
        // is an integral primitive vector with the original signs.
        let mut denom_lcm = BigInt::one();
        for c in coeffs.iter() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in coeffs.iter() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        if numer_gcd.is_zero() {
            return;
        }
        let factor = BigRational::new(denom_lcm, numer_gcd);
        for c in coeffs.iter_mut() {
            *c = &*c * &factor;
        }
    }
}

/// Convenience constructor used throughout the tests.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::from_fraction(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        let x = BigRational::parse_literal("-3/6").unwrap();
        assert_eq!(x, rat(-1, 2));
        assert_eq!(x.to_fraction_string(), "-1/2");
        assert_eq!(BigRational::parse_literal("7").unwrap(), rat(7, 1));
        assert!(BigRational::parse_literal("1/0").is_none());
        assert!(BigRational::parse_literal("a/b").is_none());
    }

    #[test]
    fn rescale_gives_primitive_integers() {
        let mut v = vec![rat(2, 3), rat(-4, 3), rat(0, 1)];
        BigRational::positive_rescale(&mut v);
        assert_eq!(v, vec![rat(1, 1), rat(-2, 1), rat(0, 1)]);
    }
}
