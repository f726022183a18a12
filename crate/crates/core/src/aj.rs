//! Membership in the AJ set, ratios of members and the unit/valuation split.
//!
//! A candidate is a T̂-series whose coefficients are truncated elements of
//! K = F_q((T)). Membership is certified by dividing by the canonical member
//! 1 − T·T̂⁻¹ and checking the quotient.

use thiserror::Error;

use crate::gf::{Field, FieldElem};
use crate::ring::Coeff;
use crate::series::literal::min_inner_prec;
use crate::series::{FqSeries, HatSeries, SeriesError, TruncSeries, Var};

/// Smallest T̂- and T-precision at which membership is decided.
pub const MIN_PRECISION: i64 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AjError {
    #[error("precision too low to decide: {0}")]
    Undecidable(String),
    #[error("input is not in the AJ set: {0}")]
    NotMember(String),
    #[error("prime element must have valuation 1, got {0:?}")]
    NotPrime(Option<i64>),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct AjVerdict {
    pub member: bool,
    /// Why membership fails.
    pub reason: Option<String>,
    /// f / (1 − T·T̂⁻¹) when it could be formed.
    pub quotient: Option<HatSeries>,
}

impl AjVerdict {
    fn fail(reason: &str, quotient: Option<HatSeries>) -> Self {
        AjVerdict {
            member: false,
            reason: Some(reason.to_string()),
            quotient,
        }
    }
}

fn inner_zero(field: &Field, m: i64) -> FqSeries {
    FqSeries::zero(Var::T, m, FieldElem::zero(field))
}

/// 1 − T·T̂⁻¹ known mod T̂^n with coefficients mod T^m.
pub fn canonical_member(field: &Field, n: i64, m: i64) -> HatSeries {
    let one = FqSeries::constant(Var::T, FieldElem::one(field), m);
    let minus_t = FqSeries::monomial(Var::T, 1, FieldElem::from_int(field, -1), m);
    TruncSeries::from_terms(Var::That, [(-1, minus_t), (0, one)], n, inner_zero(field, m))
}

/// 1 − π(T)·π(T̂)⁻¹ for a prime π, known mod T̂^n with coefficients mod T^m.
pub fn member_for_prime(pi: &FqSeries, n: i64, m: i64) -> Result<HatSeries, AjError> {
    let pv = pi.valuation().ok();
    if pv != Some(1) {
        return Err(AjError::NotPrime(pv));
    }
    let field = pi.zero_coeff().field().clone();
    let pi_t = TruncSeries::constant(Var::That, pi.truncate(m), n + 1);
    let one = TruncSeries::constant(Var::That, FqSeries::constant(Var::T, FieldElem::one(&field), m), n);
    let inv = lift_constant(&pi.with_var(Var::That), m).invert()?;
    Ok(one.sub(&pi_t.mul(&inv).truncate(n)))
}

/// π(T̂) for π ∈ F_q((T)), with constant coefficients known mod T^m.
pub fn lift_constant(pi: &FqSeries, m: i64) -> HatSeries {
    let field = pi.zero_coeff().field().clone();
    let terms = pi
        .terms()
        .map(|(k, c)| (k, FqSeries::constant(Var::T, c.clone(), m)))
        .collect::<Vec<_>>();
    TruncSeries::from_terms(Var::That, terms, pi.prec(), inner_zero(&field, m))
}

fn field_of(f: &HatSeries) -> Field {
    f.zero_coeff().zero_coeff().field().clone()
}

/// f(T̂ := T), for f with integral coefficients.
pub fn substitute_that(f: &HatSeries) -> FqSeries {
    let field = field_of(f);
    let mut prec = f.prec();
    for (k, c) in f.terms() {
        prec = prec.min(c.prec() + k);
    }
    let mut acc = FqSeries::zero(Var::T, prec, FieldElem::zero(&field));
    for (k, c) in f.terms() {
        acc = acc.add(&c.shift(k).truncate(prec));
    }
    acc
}

/// The quotient f / (1 − T·T̂⁻¹) = T̂·f / (T̂ − T), by synthetic division.
/// Assumes f(T̂ := T) = 0 and integral coefficients.
pub fn divide_by_canonical(f: &HatSeries) -> HatSeries {
    let field = f.zero_coeff().zero_coeff().field().clone();
    let m = min_inner_prec(f);
    let h = f.shift(1);
    let n = f.prec();
    let mut terms = Vec::new();
    for a in 0..n {
        let mut prec = n - a;
        for (k, c) in h.terms() {
            if k > a {
                prec = prec.min(c.prec() + k - 1 - a);
            }
        }
        let mut qa = FqSeries::zero(Var::T, prec, FieldElem::zero(&field));
        for (k, c) in h.terms() {
            if k > a {
                qa = qa.add(&c.shift(k - 1 - a).truncate(prec));
            }
        }
        terms.push((a, qa));
    }
    TruncSeries::from_terms(Var::That, terms, n, inner_zero(&field, m))
}

/// Membership test. A member certifies itself by its unit quotient.
pub fn is_aj(f: &HatSeries) -> Result<AjVerdict, AjError> {
    if f.prec() < MIN_PRECISION {
        return Err(AjError::Undecidable(format!("That-precision {} < {MIN_PRECISION}", f.prec())));
    }
    let m = min_inner_prec(f);
    if m < MIN_PRECISION {
        return Err(AjError::Undecidable(format!("T-precision {m} < {MIN_PRECISION}")));
    }
    if f.is_zero() {
        return Ok(AjVerdict::fail("condition (2) fails: f reduces to 0", None));
    }
    if f.terms().any(|(_, c)| c.lo() < 0) {
        return Ok(AjVerdict::fail("coefficients are not in O_K", None));
    }
    let reduction_is_one = f.terms().all(|(k, c)| {
        let c0 = c.coeff(0);
        if k == 0 {
            c0.is_one()
        } else {
            c0.is_zero()
        }
    }) && !f.coeff(0).is_zero();
    if f.lo() < -1 {
        return Ok(AjVerdict::fail("condition (1) fails: valuation below -1", None));
    }
    let at_t = substitute_that(f);
    if !at_t.is_zero() {
        return Ok(AjVerdict::fail("condition (1) fails: f(That := T) != 0", None));
    }
    let q = divide_by_canonical(f);
    let q0 = q.coeff(0);
    if q0.is_zero() || q0.lo() != 0 {
        return Ok(AjVerdict::fail("condition (1) fails: quotient is not a unit", Some(q)));
    }
    if !reduction_is_one {
        return Ok(AjVerdict::fail("condition (2) fails: reduction mod p_K is not 1", Some(q)));
    }
    Ok(AjVerdict {
        member: true,
        reason: None,
        quotient: Some(q),
    })
}

fn member_quotient(f: &HatSeries) -> Result<HatSeries, AjError> {
    let v = is_aj(f)?;
    match (v.member, v.quotient) {
        (true, Some(q)) => Ok(q),
        _ => Err(AjError::NotMember(v.reason.unwrap_or_default())),
    }
}

/// u = g/f, a 1-unit of alg-O_K with 𝔭_K-coefficients beyond the constant.
pub fn aj_ratio(f: &HatSeries, g: &HatSeries) -> Result<HatSeries, AjError> {
    let qf = member_quotient(f)?;
    let qg = member_quotient(g)?;
    Ok(qg.mul(&qf.invert()?))
}

/// True iff every coefficient lies in 𝔭_K except a constant term ≡ 1.
pub fn reduces_to_one(u: &HatSeries) -> bool {
    u.lo() >= 0
        && u.terms().all(|(k, c)| {
            c.lo() >= 0 && if k == 0 { c.coeff(0).is_one() } else { c.coeff(0).is_zero() }
        })
}

/// f = unit · π(T̂)^val for the prime π; returns (unit, val).
pub fn split_coords(f: &HatSeries, prime: &FqSeries) -> Result<(HatSeries, i64), AjError> {
    let pv = prime.valuation().ok();
    if pv != Some(1) {
        return Err(AjError::NotPrime(pv));
    }
    member_quotient(f)?;
    let val = f.valuation()?;
    let m = min_inner_prec(f);
    let pi = lift_constant(prime, m);
    let factor = if val <= 0 {
        pi.pow((-val) as u64)
    } else {
        pi.invert()?.pow(val as u64)
    };
    let unit = f.mul(&factor).truncate(f.prec());
    Ok((unit, val))
}
