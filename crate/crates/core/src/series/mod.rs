//! Truncated Laurent series with explicit precision, generic over the
//! coefficient ring.
//!
//! A [`TruncSeries`] stands for Σ_{lo ≤ e < prec} c_e·X^e + O(X^prec). Every
//! operation computes the precision its result is actually known to, so
//! nesting (a series in T̂ whose coefficients are series in T) gives an honest
//! finite model of rings such as K((T̂)) with K = F_q((T)).

pub mod bivar;
pub mod literal;

use std::fmt;

use thiserror::Error;

use crate::gf::{Field, FieldElem};
use crate::ring::Coeff;

pub use bivar::{BivarLaurent, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("leading coefficient is not a unit")]
    NotUnit,
    #[error("the zero series has no valuation at finite precision")]
    ZeroSeries,
    #[error("composition needs an inner series of positive valuation")]
    BadComposition,
}

/// Series variable names used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The uniformizer T of K.
    T,
    /// T̂ = 1 ⊗ T.
    That,
    S,
    Shat,
    /// Formal variable of the Artin–Hasse series.
    LowerT,
    /// Formal-module variable.
    X,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "T",
            Var::That => "That",
            Var::S => "S",
            Var::Shat => "Shat",
            Var::LowerT => "t",
            Var::X => "X",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Some(match s {
            "T" => Var::T,
            "That" => Var::That,
            "S" => Var::S,
            "Shat" => Var::Shat,
            "t" => Var::LowerT,
            "X" => Var::X,
            _ => return None,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone)]
pub struct TruncSeries<R> {
    var: Var,
    /// Valuation when nonzero; equals `prec` for the zero series.
    lo: i64,
    prec: i64,
    /// Dense coefficients for exponents lo, lo+1, ...; the first is nonzero, trailing
    /// zeros are kept only when less precise than `zero`.
    coeffs: Vec<R>,
    /// A zero of the coefficient ring, kept so the zero series still knows
    /// its coefficient domain.
    zero: R,
}

/// F_q((T)) and its relatives.
pub type FqSeries = TruncSeries<FieldElem>;
/// Series in T̂ over truncated K = F_q((T)).
pub type HatSeries = TruncSeries<FqSeries>;

impl<R: Coeff> PartialEq for TruncSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var
            && self.prec == other.prec
            && self.lo == other.lo
            && self.coeffs == other.coeffs
    }
}

impl<R: Coeff> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({}; lo={}, prec={}; ", self.var, self.lo, self.prec)?;
        f.debug_list().entries(self.coeffs.iter()).finish()?;
        write!(f, ")")
    }
}

impl<R: Coeff> TruncSeries<R> {
    /// Collects terms (summing repeats), drops exponents ≥ `prec`.
    pub fn from_terms<I>(var: Var, terms: I, prec: i64, zero: R) -> Self
    where
        I: IntoIterator<Item = (i64, R)>,
    {
        let mut terms: Vec<(i64, R)> = terms.into_iter().filter(|(e, _)| *e < prec).collect();
        if terms.is_empty() {
            return Self::zero(var, prec, zero);
        }
        terms.sort_by_key(|(e, _)| *e);
        let lo = terms[0].0;
        let hi = terms[terms.len() - 1].0;
        let mut coeffs = vec![zero.clone(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.add(&c);
        }
        Self::normalized(var, lo, prec, coeffs, zero)
    }

    /// Dense coefficients starting at exponent `lo`.
    pub fn from_dense(var: Var, lo: i64, coeffs: Vec<R>, prec: i64, zero: R) -> Self {
        let mut coeffs = coeffs;
        let keep = (prec - lo).max(0) as usize;
        coeffs.truncate(keep);
        Self::normalized(var, lo, prec, coeffs, zero)
    }

    pub fn zero(var: Var, prec: i64, zero: R) -> Self {
        TruncSeries {
            var,
            lo: prec,
            prec,
            coeffs: Vec::new(),
            zero,
        }
    }

    pub fn constant(var: Var, c: R, prec: i64) -> Self {
        let zero = c.zero_like();
        Self::from_terms(var, [(0, c)], prec, zero)
    }

    pub fn monomial(var: Var, e: i64, c: R, prec: i64) -> Self {
        let zero = c.zero_like();
        Self::from_terms(var, [(e, c)], prec, zero)
    }

    fn normalized(var: Var, lo: i64, prec: i64, mut coeffs: Vec<R>, zero: R) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero(var, prec, zero);
        }
        while coeffs.last().is_some_and(|c| c.is_zero_as_precise_as(&zero)) {
            coeffs.pop();
        }
        coeffs.drain(..lead);
        TruncSeries {
            var,
            lo: lo + lead as i64,
            prec,
            coeffs,
            zero,
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Lowest stored exponent (`prec` for the zero series).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn hi(&self) -> Option<i64> {
        let i = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some(self.lo + i as i64)
    }

    pub fn zero_coeff(&self) -> &R {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> R {
        if e < self.lo || e >= self.lo + self.coeffs.len() as i64 {
            self.zero.clone()
        } else {
            self.coeffs[(e - self.lo) as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        let lo = self.lo;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (lo + i as i64, c))
    }

    pub fn valuation(&self) -> Result<i64, SeriesError> {
        if self.is_zero() {
            Err(SeriesError::ZeroSeries)
        } else {
            Ok(self.lo)
        }
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.coeffs.first()
    }

    fn check_var(&self, other: &Self) -> Result<(), SeriesError> {
        if self.var != other.var {
            Err(SeriesError::VarMismatch(self.var, other.var))
        } else {
            Ok(())
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo).min(prec);
        let coeffs = (lo..prec).map(|e| f(&self.coeff(e), &other.coeff(e))).collect();
        Ok(Self::normalized(self.var, lo, prec, coeffs, self.zero.clone()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    /// Product with precision min(prec_f + lo_g, prec_g + lo_f).
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_var(other)?;
        let prec = (self.prec + other.lo).min(other.prec + self.lo);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var, prec, self.zero.clone()));
        }
        let lo = self.lo + other.lo;
        let len = (prec - lo).max(0) as usize;
        let mut out = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(Self::normalized(self.var, lo, prec, out, self.zero.clone()))
    }

    /// Operator shorthands for series known to share a variable.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("series variables agree")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("series variables agree")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("series variables agree")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    /// Multiply every coefficient by `c` on the left.
    pub fn scale(&self, c: &R) -> Self {
        self.map_coeffs(|x| c.mul(x))
    }

    /// Apply `f` to each coefficient, keeping exponents and precision.
    pub fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let coeffs = self.coeffs.iter().map(&f).collect();
        Self::normalized(self.var, self.lo, self.prec, coeffs, self.zero.clone())
    }

    /// Multiply by var^k.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            var: self.var,
            lo: self.lo + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
            zero: self.zero.clone(),
        }
    }

    /// Forget everything at or above `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let lo = self.lo.min(prec);
        let coeffs = (lo..prec).map(|e| self.coeff(e)).collect();
        Self::normalized(self.var, lo, prec, coeffs, self.zero.clone())
    }

    pub fn with_var(&self, var: Var) -> Self {
        let mut s = self.clone();
        s.var = var;
        s
    }

    /// g with f·g = 1 to the propagated precision.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let lead = self.leading_coeff().ok_or(SeriesError::NotUnit)?;
        let d0 = lead.try_inv().ok_or(SeriesError::NotUnit)?;
        let v = self.lo;
        let rel = (self.prec - v) as usize;
        let mut d: Vec<R> = Vec::with_capacity(rel);
        d.push(d0.clone());
        for k in 1..rel {
            let mut acc = self.zero.clone();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                let ci = &self.coeffs[i];
                if !ci.is_zero() {
                    acc = acc.add(&ci.mul(&d[k - i]));
                }
            }
            d.push(d0.mul(&acc).neg());
        }
        Ok(Self::normalized(self.var, -v, -v + rel as i64, d, self.zero.clone()))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale_int(self.lo + i as i64))
            .collect();
        if self.is_zero() {
            return Self::zero(self.var, self.prec - 1, self.zero.clone());
        }
        Self::normalized(self.var, self.lo - 1, self.prec - 1, coeffs, self.zero.clone())
    }

    /// f′/f.
    pub fn dlog(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::ZeroSeries);
        }
        Ok(self.derivative().mul(&self.invert()?))
    }

    /// f(g) for f with no negative exponents and g of positive valuation.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        self.check_var(inner)?;
        let v = inner.valuation().map_err(|_| SeriesError::BadComposition)?;
        if v < 1 || self.lo < 0 {
            return Err(SeriesError::BadComposition);
        }
        let mut prec = self.prec.saturating_mul(v);
        if self.terms().any(|(e, _)| e >= 1) {
            prec = prec.min(inner.prec);
        }
        let one = Self::constant(self.var, self.zero.one_like(), prec);
        let mut acc = Self::zero(self.var, prec, self.zero.clone());
        let mut power = one;
        for e in 0..self.prec {
            if e * v >= prec {
                break;
            }
            let c = self.coeff(e);
            if !c.is_zero() {
                acc = acc.add(&power.scale(&c).truncate(prec));
            }
            power = power.mul(inner).truncate(prec);
        }
        Ok(acc.truncate(prec))
    }

    /// Coefficientwise equality wherever both sides are known.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.var != other.var {
            return false;
        }
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo);
        (lo..prec).all(|e| self.coeff(e).agrees(&other.coeff(e)))
    }
}

impl TruncSeries<FieldElem> {
    /// Apply x ↦ x^q to every coefficient.
    pub fn coeff_frobenius(&self, q: u64) -> Self {
        coeff_frobenius(self, q)
    }

    /// T as an element of F_q((T)) known mod T^prec.
    pub fn uniformizer(field: &Field, prec: i64) -> Self {
        Self::monomial(Var::T, 1, FieldElem::one(field), prec)
    }
}

/// Apply x ↦ x^q to every coefficient, leaving exponents fixed.
pub fn coeff_frobenius<R: Coeff>(g: &TruncSeries<R>, q: u64) -> TruncSeries<R> {
    g.map_coeffs(|c| c.pow(q))
}

impl<R: Coeff> Coeff for TruncSeries<R> {
    fn zero_like(&self) -> Self {
        Self::zero(self.var, self.prec, self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.var, self.zero.one_like(), self.prec.max(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn is_zero_as_precise_as(&self, template: &Self) -> bool {
        self.coeffs.is_empty() && self.prec >= template.prec
    }
    fn add(&self, rhs: &Self) -> Self {
        TruncSeries::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        TruncSeries::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        TruncSeries::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        TruncSeries::mul(self, rhs)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::constant(self.var, self.zero.from_int_like(n), self.prec.max(1))
    }
    fn try_inv(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.scale_int(n))
    }
    fn agrees(&self, other: &Self) -> bool {
        self.agrees_with(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;
    use crate::ring::rat;
    use num_rational::BigRational;

    fn qs(terms: &[(i64, i64, i64)], prec: i64) -> TruncSeries<BigRational> {
        TruncSeries::from_terms(
            Var::T,
            terms.iter().map(|&(e, n, d)| (e, rat(n, d))),
            prec,
            rat(0, 1),
        )
    }

    #[test]
    fn add_and_telescoping_product() {
        let a = qs(&[(0, 1, 1), (1, 1, 1)], 5);
        let b = qs(&[(0, 1, 1), (1, -1, 1)], 5);
        assert_eq!(a.add(&b), qs(&[(0, 2, 1)], 5));
        let geo = qs(&[(0, 1, 1), (1, 1, 1), (2, 1, 1), (3, 1, 1), (4, 1, 1)], 5);
        assert_eq!(b.mul(&geo), qs(&[(0, 1, 1)], 5));
    }

    #[test]
    fn monomial_product_precision() {
        let tinv = qs(&[(-1, 1, 1)], 6);
        let t = qs(&[(1, 1, 1)], 6);
        let one = tinv.mul(&t);
        assert_eq!(one.coeff(0), rat(1, 1));
        assert_eq!(one.prec(), 5);
    }

    #[test]
    fn inversion_examples() {
        let f = qs(&[(0, 1, 1), (1, -1, 1)], 4);
        assert_eq!(
            f.invert().unwrap(),
            qs(&[(0, 1, 1), (1, 1, 1), (2, 1, 1), (3, 1, 1)], 4)
        );
        let t = qs(&[(1, 1, 1)], 4);
        let ti = t.invert().unwrap();
        assert_eq!(ti.valuation().unwrap(), -1);
        assert_eq!(ti.coeff(-1), rat(1, 1));
        // Oracle: multiply back.
        let f = qs(&[(0, 2, 1), (1, 1, 1)], 3);
        let g = f.invert().unwrap();
        assert_eq!(g, qs(&[(0, 1, 2), (1, -1, 4), (2, 1, 8)], 3));
        assert!(f.mul(&g).agrees_with(&qs(&[(0, 1, 1)], 3)));
    }

    #[test]
    fn zero_is_not_invertible_and_has_no_valuation() {
        let z = qs(&[], 4);
        assert_eq!(z.invert(), Err(SeriesError::NotUnit));
        assert_eq!(z.valuation(), Err(SeriesError::ZeroSeries));
        assert_eq!(z.dlog(), Err(SeriesError::ZeroSeries));
    }

    #[test]
    fn valuations() {
        let f = qs(&[(-1, 1, 1), (0, 1, 1)], 4);
        assert_eq!(f.valuation(), Ok(-1));
        assert_eq!(qs(&[(0, 1, 1)], 4).valuation(), Ok(0));
    }

    #[test]
    fn dlog_examples() {
        assert!(qs(&[(0, 1, 1)], 5).dlog().unwrap().is_zero());
        let t = qs(&[(1, 1, 1)], 5);
        let d = t.dlog().unwrap();
        assert_eq!(d.coeff(-1), rat(1, 1));
        assert_eq!(d.terms().count(), 1);

        let f2 = FieldDesc::prime(2).unwrap();
        let one = FieldElem::one(&f2);
        let f = FqSeries::from_terms(Var::LowerT, [(0, one.clone()), (1, one.neg())], 4, one.zero_like());
        let d = f.dlog().unwrap();
        // Oracle: d·f must equal f′ wherever known.
        assert!(d.mul(&f).agrees_with(&f.derivative()));
        let expected = FqSeries::from_terms(
            Var::LowerT,
            (0..3).map(|e| (e, one.neg())),
            3,
            one.zero_like(),
        );
        assert!(d.agrees_with(&expected));
    }

    #[test]
    fn variable_mismatch() {
        let a = qs(&[(0, 1, 1)], 3);
        let b = a.with_var(Var::S);
        assert_eq!(a.try_add(&b), Err(SeriesError::VarMismatch(Var::T, Var::S)));
    }

    #[test]
    fn frobenius_on_coefficients() {
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let w = FieldElem::generator(&f4);
        let g = FqSeries::from_terms(Var::That, [(0, w.clone()), (2, w.clone())], 4, w.zero_like());
        let h = g.coeff_frobenius(2);
        assert_eq!(h.coeff(0), w.mul(&w));
        assert_eq!(h.coeff(2), w.mul(&w));
        let one = FqSeries::constant(Var::That, FieldElem::one(&f4), 4);
        assert_eq!(one.coeff_frobenius(4), one);
        let f2 = FieldDesc::prime(2).unwrap();
        let u = FqSeries::from_terms(Var::T, [(0, FieldElem::one(&f2)), (3, FieldElem::one(&f2))], 6, FieldElem::zero(&f2));
        assert_eq!(u.coeff_frobenius(2), u);
    }

    #[test]
    fn composition() {
        // (1 + x)∘(x + x²) = 1 + x + x².
        let f = qs(&[(0, 1, 1), (1, 1, 1)], 4);
        let g = qs(&[(1, 1, 1), (2, 1, 1)], 4);
        assert_eq!(f.compose(&g).unwrap(), qs(&[(0, 1, 1), (1, 1, 1), (2, 1, 1)], 4));
        assert_eq!(f.compose(&f), Err(SeriesError::BadComposition));
    }
}
