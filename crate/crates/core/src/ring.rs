//! The coefficient-ring abstraction shared by every series and form type.
//!
//! Coefficient domains here carry runtime context (a finite field's modulus,
//! a series precision, a tower's relations), so constants are produced from
//! an existing element with [`Coeff::zero_like`] and friends instead of from
//! associated functions.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring whose elements know how to build their own constants.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Image of the integer `n` under the canonical map from Z.
    fn from_int_like(&self, n: i64) -> Self;
    /// Multiplicative inverse, or `None` if `self` is not a unit.
    fn try_inv(&self) -> Option<Self>;

    /// Equality up to whatever precision both sides carry. Exact domains
    /// fall back to `==`.
    fn agrees(&self, other: &Self) -> bool {
        self == other
    }

    /// Zero that carries at least as much information as `template`.
    fn is_zero_as_precise_as(&self, template: &Self) -> bool {
        let _ = template;
        self.is_zero()
    }

    /// Multiply by the image of `n`, coefficientwise for nested domains.
    fn scale_int(&self, n: i64) -> Self {
        self.mul(&self.from_int_like(n))
    }

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Shorthand for an exact rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Reduce a p-integral rational modulo the prime `p`. Returns `None` when
/// `p` divides the reduced denominator.
pub fn reduce_rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = ((x.numer() % &pb) + &pb) % &pb;
    let den = ((x.denom() % &pb) + &pb) % &pb;
    if den.is_zero() {
        return None;
    }
    let num = u64::try_from(num.abs()).ok()?;
    let den = u64::try_from(den.abs()).ok()?;
    let inv = mod_pow(den, p - 2, p);
    Some(num * inv % p)
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_pow_and_inverse() {
        let x = rat(2, 3);
        assert_eq!(x.pow(3), rat(8, 27));
        assert_eq!(x.try_inv(), Some(rat(3, 2)));
        assert_eq!(rat(0, 1).try_inv(), None);
    }

    #[test]
    fn reduction_mod_p() {
        assert_eq!(reduce_rational_mod(&rat(1, 2), 3), Some(2));
        assert_eq!(reduce_rational_mod(&rat(-1, 1), 5), Some(4));
        assert_eq!(reduce_rational_mod(&rat(1, 3), 3), None);
        assert_eq!(reduce_rational_mod(&rat(7, 4), 5), Some(3));
    }
}
