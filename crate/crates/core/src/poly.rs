//! Quotients R[y]/(m(y)) by a monic polynomial, used for explicit covers.

use std::fmt;
use std::sync::Arc;

use crate::ring::Coeff;

/// A monic modulus y^d + c_{d−1}y^{d−1} + … + c_0, stored as (c_0, …, c_{d−1}).
#[derive(Debug, Clone, PartialEq)]
pub struct Monic<R> {
    lower: Vec<R>,
}

impl<R: Coeff> Monic<R> {
    /// From the non-leading coefficients, constant first. Degree must be ≥ 1.
    pub fn new(lower: Vec<R>) -> Arc<Self> {
        assert!(!lower.is_empty(), "modulus must have positive degree");
        Arc::new(Monic { lower })
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[R] {
        &self.lower
    }

    /// Eisenstein for a valuation given as a closure: every lower coefficient
    /// has valuation ≥ 1 and the constant term exactly 1.
    pub fn is_eisenstein(&self, val: impl Fn(&R) -> Option<i64>) -> bool {
        val(&self.lower[0]) == Some(1)
            && self.lower[1..].iter().all(|c| c.is_zero() || val(c).is_some_and(|v| v >= 1))
    }
}

/// An element Σ a_i y^i, i < deg m.
#[derive(Clone)]
pub struct PolyQuotient<R> {
    modulus: Arc<Monic<R>>,
    coeffs: Vec<R>,
}

impl<R: Coeff> PartialEq for PolyQuotient<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Coeff> fmt::Debug for PolyQuotient<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<R: Coeff> PolyQuotient<R> {
    pub fn from_coeffs(modulus: &Arc<Monic<R>>, coeffs: Vec<R>) -> Self {
        let zero = modulus.lower[0].zero_like();
        let mut out = PolyQuotient {
            modulus: modulus.clone(),
            coeffs: Vec::new(),
        };
        out.coeffs = out.reduce(coeffs, &zero);
        out
    }

    pub fn constant(modulus: &Arc<Monic<R>>, c: R) -> Self {
        Self::from_coeffs(modulus, vec![c])
    }

    /// The class of y.
    pub fn generator(modulus: &Arc<Monic<R>>) -> Self {
        let zero = modulus.lower[0].zero_like();
        Self::from_coeffs(modulus, vec![zero.clone(), zero.one_like()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs[i].clone()
    }

    pub fn modulus(&self) -> &Arc<Monic<R>> {
        &self.modulus
    }

    pub fn scale(&self, c: &R) -> Self {
        let coeffs = self.coeffs.iter().map(|x| c.mul(x)).collect();
        PolyQuotient {
            modulus: self.modulus.clone(),
            coeffs,
        }
    }

    fn reduce(&self, mut v: Vec<R>, zero: &R) -> Vec<R> {
        let d = self.modulus.degree();
        while v.len() > d {
            let top = v.pop().expect("nonempty");
            let shift = v.len() - d;
            if !top.is_zero() {
                for (i, c) in self.modulus.lower.iter().enumerate() {
                    v[shift + i] = v[shift + i].sub(&top.mul(c));
                }
            }
        }
        v.resize(d, zero.clone());
        v
    }

    fn zero_elem(&self) -> R {
        self.modulus.lower[0].zero_like()
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        PolyQuotient {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl<R: Coeff> Coeff for PolyQuotient<R> {
    fn zero_like(&self) -> Self {
        Self::from_coeffs(&self.modulus, vec![])
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.modulus, self.zero_elem().one_like())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.add(b))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.sub(b))
    }
    fn neg(&self) -> Self {
        self.scale(&self.zero_elem().one_like().neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let zero = self.zero_elem();
        let d = self.modulus.degree();
        let mut out = vec![zero.clone(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        PolyQuotient {
            modulus: self.modulus.clone(),
            coeffs: self.reduce(out, &zero),
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::constant(&self.modulus, self.zero_elem().from_int_like(n))
    }
    /// Only constants with invertible value are inverted.
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::constant(&self.modulus, self.coeffs[0].try_inv()?))
    }
    fn agrees(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees(b))
    }
    fn scale_int(&self, n: i64) -> Self {
        PolyQuotient {
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale_int(n)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn gaussian_rationals() {
        let m = Monic::new(vec![rat(1, 1), rat(0, 1)]);
        let i = PolyQuotient::generator(&m);
        assert_eq!(i.mul(&i), PolyQuotient::constant(&m, rat(-1, 1)));
        assert!(i.pow(4).is_one());
        assert!(i.try_inv().is_none());
    }

    #[test]
    fn eisenstein_by_valuation() {
        let m = Monic::new(vec![rat(3, 1), rat(6, 1), rat(0, 1)]);
        let v3 = |c: &num_rational::BigRational| {
            let mut n = c.numer().clone();
            let mut k = 0;
            if num_traits::Zero::is_zero(&n) {
                return None;
            }
            while &n % 3 == num_bigint::BigInt::from(0) {
                n /= 3;
                k += 1;
            }
            Some(k)
        };
        assert!(m.is_eisenstein(v3));
        let m = Monic::new(vec![rat(9, 1), rat(0, 1)]);
        assert!(!m.is_eisenstein(v3));
    }
}
