//! Text form of series: `coeff*VAR^exp` terms joined by `+`/`-`, followed by
//! one `(mod VAR^N)` suffix per variable whose precision is stated.
//!
//! Coefficients are integers, rationals `a/b`, or `[c0,c1,...]` for an F_q
//! element in polynomial basis (constant coordinate first). Examples:
//!
//! ```text
//! 1 + t + t^3 + t^4 (mod t^5)
//! 1 - 1*T^1*That^-1 (mod That^8) (mod T^16)
//! [0,1]*That^2 + 3/4 (mod That^6)
//! ```

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{BivarLaurent, FqSeries, HatSeries, TruncSeries, Var, Window};
use crate::gf::{Field, FieldElem};
use crate::ring::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {0:?}")]
    UnknownVar(String),
    #[error("variable {0} is not allowed here")]
    UnexpectedVar(Var),
    #[error("coefficient {0} is not valid in this domain")]
    BadCoeff(String),
    #[error("no precision given for {0} and no default available")]
    MissingPrecision(Var),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffLit {
    Rational(BigRational),
    Vector(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LitTerm {
    pub coeff: CoeffLit,
    pub powers: Vec<(Var, i64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Literal {
    pub terms: Vec<LitTerm>,
    pub mods: Vec<(Var, i64)>,
}

impl Literal {
    pub fn precision_of(&self, var: Var) -> Option<i64> {
        self.mods.iter().find(|(v, _)| *v == var).map(|(_, n)| *n)
    }

    fn exponent(term: &LitTerm, var: Var) -> i64 {
        term.powers.iter().filter(|(v, _)| *v == var).map(|(_, e)| e).sum()
    }

    fn check_vars(&self, allowed: &[Var]) -> Result<(), LiteralError> {
        for t in &self.terms {
            for (v, _) in &t.powers {
                if !allowed.contains(v) {
                    return Err(LiteralError::UnexpectedVar(*v));
                }
            }
        }
        for (v, _) in &self.mods {
            if !allowed.contains(v) {
                return Err(LiteralError::UnexpectedVar(*v));
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> LiteralError {
        LiteralError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), LiteralError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt, LiteralError> {
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let v: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
        Ok(if neg { -v } else { v })
    }

    fn small_int(&mut self) -> Result<i64, LiteralError> {
        let v = self.int()?;
        i64::try_from(v).map_err(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        (start != self.pos)
            .then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn var(&mut self) -> Result<Var, LiteralError> {
        let name = self.ident().ok_or_else(|| self.err("expected variable"))?;
        Var::from_name(&name).ok_or(LiteralError::UnknownVar(name))
    }

    fn power(&mut self) -> Result<(Var, i64), LiteralError> {
        let v = self.var()?;
        let e = if self.eat(b'^') { self.small_int()? } else { 1 };
        Ok((v, e))
    }

    fn coeff(&mut self) -> Result<CoeffLit, LiteralError> {
        if self.eat(b'[') {
            let mut v = vec![self.small_int()?];
            while self.eat(b',') {
                v.push(self.small_int()?);
            }
            self.expect(b']')?;
            return Ok(CoeffLit::Vector(v));
        }
        let num = self.int()?;
        let den = if self.eat(b'/') { self.int()? } else { BigInt::one() };
        if den.is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(CoeffLit::Rational(BigRational::new(num, den)))
    }

    fn term(&mut self, negate: bool) -> Result<LitTerm, LiteralError> {
        let mut powers = Vec::new();
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'[' => {
                let c = self.coeff()?;
                while self.eat(b'*') {
                    powers.push(self.power()?);
                }
                c
            }
            Some(c) if c.is_ascii_alphabetic() => {
                powers.push(self.power()?);
                while self.eat(b'*') {
                    powers.push(self.power()?);
                }
                CoeffLit::Rational(BigRational::one())
            }
            _ => return Err(self.err("expected term")),
        };
        let coeff = match (coeff, negate) {
            (CoeffLit::Rational(r), true) => CoeffLit::Rational(-r),
            (CoeffLit::Vector(v), true) => CoeffLit::Vector(v.into_iter().map(|x| -x).collect()),
            (c, false) => c,
        };
        Ok(LitTerm { coeff, powers })
    }

    fn literal(&mut self) -> Result<Literal, LiteralError> {
        let mut lit = Literal::default();
        let mut negate = self.eat(b'-');
        loop {
            if self.peek() == Some(b'(') {
                break;
            }
            lit.terms.push(self.term(negate)?);
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                break;
            }
        }
        while self.eat(b'(') {
            match self.ident().as_deref() {
                Some("mod") => {}
                _ => return Err(self.err("expected 'mod'")),
            }
            let (v, n) = self.power()?;
            self.expect(b')')?;
            lit.mods.push((v, n));
        }
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(lit)
    }
}

pub fn parse_literal(src: &str) -> Result<Literal, LiteralError> {
    Parser {
        src: src.as_bytes(),
        pos: 0,
    }
    .literal()
}

pub fn coeff_to_field(c: &CoeffLit, field: &Field) -> Result<FieldElem, LiteralError> {
    match c {
        CoeffLit::Vector(v) => {
            if v.len() != field.n() {
                return Err(LiteralError::BadCoeff(format!("{v:?}")));
            }
            let p = field.p() as i64;
            let coords: Vec<u64> = v.iter().map(|x| x.rem_euclid(p) as u64).collect();
            Ok(FieldElem::from_coeffs(field, &coords))
        }
        CoeffLit::Rational(r) => {
            let p = BigInt::from(field.p());
            let num = i64::try_from(((r.numer() % &p) + &p) % &p).expect("reduced residue");
            let den = i64::try_from(((r.denom() % &p) + &p) % &p).expect("reduced residue");
            let den = FieldElem::from_int(field, den)
                .inverse()
                .ok_or_else(|| LiteralError::BadCoeff(r.to_string()))?;
            Ok(FieldElem::from_int(field, num).mul(&den))
        }
    }
}

pub fn coeff_to_rational(c: &CoeffLit) -> Result<BigRational, LiteralError> {
    match c {
        CoeffLit::Rational(r) => Ok(r.clone()),
        CoeffLit::Vector(v) => Err(LiteralError::BadCoeff(format!("{v:?}"))),
    }
}

fn prec_for(lit: &Literal, var: Var, default: Option<i64>) -> Result<i64, LiteralError> {
    lit.precision_of(var)
        .or(default)
        .ok_or(LiteralError::MissingPrecision(var))
}

/// A univariate series over F_q in `var`.
pub fn fq_series(src: &str, var: Var, field: &Field, default_prec: Option<i64>) -> Result<FqSeries, LiteralError> {
    let lit = parse_literal(src)?;
    lit.check_vars(&[var])?;
    let prec = prec_for(&lit, var, default_prec)?;
    let terms = lit
        .terms
        .iter()
        .map(|t| Ok((Literal::exponent(t, var), coeff_to_field(&t.coeff, field)?)))
        .collect::<Result<Vec<_>, LiteralError>>()?;
    Ok(TruncSeries::from_terms(var, terms, prec, FieldElem::zero(field)))
}

/// A univariate series over Q in `var`.
pub fn rational_series(src: &str, var: Var, default_prec: Option<i64>) -> Result<TruncSeries<BigRational>, LiteralError> {
    let lit = parse_literal(src)?;
    lit.check_vars(&[var])?;
    let prec = prec_for(&lit, var, default_prec)?;
    let terms = lit
        .terms
        .iter()
        .map(|t| Ok((Literal::exponent(t, var), coeff_to_rational(&t.coeff)?)))
        .collect::<Result<Vec<_>, LiteralError>>()?;
    Ok(TruncSeries::from_terms(var, terms, prec, BigRational::zero()))
}

/// A series in T̂ with coefficients in truncated F_q((T)).
pub fn hat_series(
    src: &str,
    field: &Field,
    default_outer: Option<i64>,
    default_inner: Option<i64>,
) -> Result<HatSeries, LiteralError> {
    let lit = parse_literal(src)?;
    lit.check_vars(&[Var::T, Var::That])?;
    let outer = prec_for(&lit, Var::That, default_outer)?;
    let inner = prec_for(&lit, Var::T, default_inner)?;
    let zero_inner = FqSeries::zero(Var::T, inner, FieldElem::zero(field));
    let terms = lit
        .terms
        .iter()
        .map(|t| {
            let c = coeff_to_field(&t.coeff, field)?;
            let inner_series = FqSeries::monomial(Var::T, Literal::exponent(t, Var::T), c, inner);
            Ok((Literal::exponent(t, Var::That), inner_series))
        })
        .collect::<Result<Vec<_>, LiteralError>>()?;
    Ok(TruncSeries::from_terms(Var::That, terms, outer, zero_inner))
}

/// A bivariate Laurent polynomial in S, T with coefficients from `conv`.
pub fn bivar<R: Coeff>(
    src: &str,
    zero: R,
    conv: impl Fn(&CoeffLit) -> Result<R, LiteralError>,
) -> Result<BivarLaurent<R>, LiteralError> {
    let lit = parse_literal(src)?;
    lit.check_vars(&[Var::S, Var::T])?;
    let mut out = BivarLaurent::zero(Window::new(0, 0, 0, 0), zero);
    for t in &lit.terms {
        let key = (Literal::exponent(t, Var::S), Literal::exponent(t, Var::T));
        out.add_term(key, &conv(&t.coeff)?);
    }
    Ok(out)
}

/// How a coefficient prints inside a term.
pub trait CoeffText {
    /// (is negative, magnitude text).
    fn signed_text(&self) -> (bool, String);
}

impl CoeffText for FieldElem {
    fn signed_text(&self) -> (bool, String) {
        (false, self.to_string())
    }
}

impl CoeffText for BigRational {
    fn signed_text(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

fn push_term(out: &mut String, negative: bool, mag: &str, monos: &[(Var, i64)]) {
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let monos: Vec<String> = monos
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if monos.is_empty() {
        out.push_str(mag);
    } else if mag == "1" {
        out.push_str(&monos.join("*"));
    } else {
        let _ = write!(out, "{mag}*{}", monos.join("*"));
    }
}

pub fn format_series<R: Coeff + CoeffText>(s: &TruncSeries<R>) -> String {
    let mut out = String::new();
    for (e, c) in s.terms() {
        let (neg, mag) = c.signed_text();
        push_term(&mut out, neg, &mag, &[(s.var(), e)]);
    }
    if out.is_empty() {
        out.push('0');
    }
    let _ = write!(out, " (mod {}^{})", s.var(), s.prec());
    out
}

/// Smallest coefficient precision in a nested series.
pub fn min_inner_prec<R: Coeff>(s: &TruncSeries<TruncSeries<R>>) -> i64 {
    let lo = s.lo();
    let hi = s.hi().unwrap_or(lo - 1);
    (lo..=hi)
        .map(|e| s.coeff(e).prec())
        .min()
        .unwrap_or_else(|| s.zero_coeff().prec())
}

/// Truncate every coefficient of a nested series to precision `m`.
pub fn truncate_inner<R: Coeff>(s: &TruncSeries<TruncSeries<R>>, m: i64) -> TruncSeries<TruncSeries<R>> {
    let zero = TruncSeries::zero(s.zero_coeff().var(), m, s.zero_coeff().zero_coeff().clone());
    TruncSeries::from_terms(
        s.var(),
        s.terms().map(|(e, c)| (e, c.truncate(m))),
        s.prec(),
        zero,
    )
}

/// Print a nested series with a single inner precision (the smallest one).
pub fn format_nested<R: Coeff + CoeffText>(s: &TruncSeries<TruncSeries<R>>) -> String {
    let m = min_inner_prec(s);
    let inner_var = s.zero_coeff().var();
    let mut out = String::new();
    for (e, c) in s.terms() {
        for (a, x) in c.truncate(m).terms() {
            let (neg, mag) = x.signed_text();
            push_term(&mut out, neg, &mag, &[(inner_var, a), (s.var(), e)]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    let _ = write!(out, " (mod {}^{}) (mod {}^{})", s.var(), s.prec(), inner_var, m);
    out
}

pub fn format_bivar<R: Coeff + CoeffText>(b: &BivarLaurent<R>) -> String {
    let mut out = String::new();
    for ((a, e), c) in b.terms() {
        let (neg, mag) = c.signed_text();
        push_term(&mut out, neg, &mag, &[(Var::S, a), (Var::T, e)]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
