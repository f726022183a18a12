//! Rank-one connections in characteristic 0: closed 1-forms on
//! K = Q((S))((T)) at window scale, their classes modulo dlog K^×, and the
//! image of the pullback d(Σ a_{nm} S⁻ⁿT⁻ᵐ).
//!
//! A form is written ω = P·dlog S + Q·dlog T with P = S·a_S, Q = T·a_T. It is
//! closed iff b·p_{ab} = a·q_{ab} for every monomial SᵃTᵇ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{BivarLaurent, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DmodError {
    #[error("the form is not closed: mismatch at S^{0} T^{1}")]
    NotClosed(i64, i64),
}

/// Finite Laurent polynomials in S, T over Q.
pub type QElem = BivarLaurent<BigRational>;

fn qzero() -> QElem {
    QElem::zero(Window::new(0, 0, 0, 0), BigRational::zero())
}

/// a_S dS + a_T dT.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormQ {
    pub a_s: QElem,
    pub a_t: QElem,
}

impl OneFormQ {
    pub fn zero() -> Self {
        OneFormQ { a_s: qzero(), a_t: qzero() }
    }

    /// P·dlog S + Q·dlog T.
    pub fn from_dlog(p: &QElem, q: &QElem) -> Self {
        OneFormQ {
            a_s: p.shift(-1, 0),
            a_t: q.shift(0, -1),
        }
    }

    /// c·dlog S.
    pub fn dlog_s(c: BigRational) -> Self {
        Self::from_dlog(&QElem::monomial(0, 0, c), &qzero())
    }

    /// c·dlog T.
    pub fn dlog_t(c: BigRational) -> Self {
        Self::from_dlog(&qzero(), &QElem::monomial(0, 0, c))
    }

    /// (P, Q) with ω = P·dlog S + Q·dlog T.
    pub fn dlog_coeffs(&self) -> (QElem, QElem) {
        (self.a_s.shift(1, 0), self.a_t.shift(0, 1))
    }

    pub fn add(&self, other: &Self) -> Self {
        OneFormQ {
            a_s: self.a_s.add(&other.a_s),
            a_t: self.a_t.add(&other.a_t),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        OneFormQ {
            a_s: self.a_s.sub(&other.a_s),
            a_t: self.a_t.sub(&other.a_t),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        OneFormQ {
            a_s: self.a_s.scale(c),
            a_t: self.a_t.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a_s.is_zero() && self.a_t.is_zero()
    }
}

/// df = ∂f/∂S dS + ∂f/∂T dT.
pub fn exterior_derivative(f: &QElem) -> OneFormQ {
    OneFormQ {
        a_s: f.d_s(),
        a_t: f.d_t(),
    }
}

fn first_mismatch(omega: &OneFormQ) -> Option<(i64, i64)> {
    let lhs = omega.a_s.d_t();
    let rhs = omega.a_t.d_s();
    lhs.sub(&rhs).support().next()
}

/// ∂a_S/∂T = ∂a_T/∂S.
pub fn is_closed(omega: &OneFormQ) -> bool {
    first_mismatch(omega).is_none()
}

/// The class of a closed form modulo dlog K^×.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompResult {
    /// Coefficient of dlog S, reduced into [0, 1).
    pub a: BigRational,
    /// Coefficient of dlog T, reduced into [0, 1).
    pub b: BigRational,
    /// Integer parts removed from the dlog S and dlog T coefficients.
    pub a_int: BigInt,
    pub b_int: BigInt,
    /// Potential on S⁻ⁱ, T⁻ʲ, SⁱT⁻ʲ, S⁻ⁱT⁻ʲ (i, j ≥ 1).
    pub h: QElem,
    /// Potential on the log region, whose differential is a dlog of a 1-unit.
    pub absorbed: QElem,
}

impl DecompResult {
    /// a·dlog S + b·dlog T + dh + d(absorbed) + integer parts.
    pub fn reassemble(&self) -> OneFormQ {
        let a = &self.a + BigRational::from_integer(self.a_int.clone());
        let b = &self.b + BigRational::from_integer(self.b_int.clone());
        OneFormQ::dlog_s(a)
            .add(&OneFormQ::dlog_t(b))
            .add(&exterior_derivative(&self.h))
            .add(&exterior_derivative(&self.absorbed))
    }

    pub fn class_is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b) && self.h.is_zero()
    }
}

/// S-exponent ≥ 1 with T-exponent 0, or T-exponent ≥ 1.
pub fn in_log_region((a, b): (i64, i64)) -> bool {
    b >= 1 || (b == 0 && a >= 1)
}

fn split_mod_z(x: &BigRational) -> (BigRational, BigInt) {
    let fl = x.floor().to_integer();
    (x - BigRational::from_integer(fl.clone()), fl)
}

/// ω = A·dlog S + B·dlog T + dh + (dlog of a 1-unit), A and B mod Z.
pub fn decompose_one_form(omega: &OneFormQ) -> Result<DecompResult, DmodError> {
    if let Some((a, b)) = first_mismatch(omega) {
        return Err(DmodError::NotClosed(a + 1, b + 1));
    }
    let (p, q) = omega.dlog_coeffs();
    let (a, a_int) = split_mod_z(&p.coeff(0, 0));
    let (b, b_int) = split_mod_z(&q.coeff(0, 0));
    let mut h = qzero();
    let mut absorbed = qzero();
    let keys: std::collections::BTreeSet<(i64, i64)> = p.support().chain(q.support()).collect();
    for (x, y) in keys {
        if (x, y) == (0, 0) {
            continue;
        }
        let c = if x != 0 {
            p.coeff(x, y) / BigRational::from_integer(BigInt::from(x))
        } else {
            q.coeff(x, y) / BigRational::from_integer(BigInt::from(y))
        };
        if in_log_region((x, y)) {
            absorbed.add_term((x, y), &c);
        } else {
            h.add_term((x, y), &c);
        }
    }
    Ok(DecompResult {
        a,
        b,
        a_int,
        b_int,
        h,
        absorbed,
    })
}

/// d(Σ a_{nm} S⁻ⁿT⁻ᵐ).
pub fn phi1_pullback(coeffs: &BTreeMap<(i64, i64), BigRational>) -> OneFormQ {
    let mut f = qzero();
    for (&(n, m), c) in coeffs {
        f.add_term((-n, -m), c);
    }
    exterior_derivative(&f)
}

/// Whether the class of ω lies in d(S⁻¹T⁻¹Q[S⁻¹, T⁻¹]).
pub fn in_image_test(omega: &OneFormQ) -> Result<bool, DmodError> {
    let d = decompose_one_form(omega)?;
    Ok(Zero::is_zero(&d.a) && Zero::is_zero(&d.b) && d.h.support().all(|(x, y)| x < 0 && y < 0))
}

/// 1/u for u ∈ 1 + (S, T)Q[S, T], truncated to exponents in [0, n] × [0, m].
pub fn inverse_one_unit(u: &QElem, n: i64, m: i64) -> QElem {
    let bx = Window::new(0, n, 0, m);
    let one = QElem::monomial(0, 0, BigRational::one());
    let v = u.sub(&one).clip(bx);
    let mut acc = one.clone();
    let mut power = one;
    for _ in 0..(n + m) {
        power = power.mul(&v.neg()).clip(bx);
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power);
    }
    acc.clip(bx)
}

/// dlog(Sᵃ Tᵇ u), u a 1-unit polynomial, truncated to the box [0,n] × [0,m]
/// in the dlog coefficients.
pub fn dlog_of_unit(a: i64, b: i64, u: &QElem, n: i64, m: i64) -> OneFormQ {
    let bx = Window::new(0, n, 0, m);
    let inv = inverse_one_unit(u, n, m);
    let p = u.d_s().shift(1, 0).mul(&inv).clip(bx);
    let q = u.d_t().shift(0, 1).mul(&inv).clip(bx);
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    OneFormQ::from_dlog(&p, &q)
        .add(&OneFormQ::dlog_s(int(a)))
        .add(&OneFormQ::dlog_t(int(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    fn q(terms: &[(i64, i64, i64, i64)]) -> QElem {
        let mut f = qzero();
        for &(a, b, n, d) in terms {
            f.add_term((a, b), &rat(n, d));
        }
        f
    }

    #[test]
    fn derivative_examples() {
        let w = exterior_derivative(&q(&[(-1, -1, 1, 1)]));
        assert_eq!(w.a_s, q(&[(-2, -1, -1, 1)]));
        assert_eq!(w.a_t, q(&[(-1, -2, -1, 1)]));
        assert!(is_closed(&w));
        let t_ds = OneFormQ { a_s: q(&[(0, 1, 1, 1)]), a_t: qzero() };
        assert!(!is_closed(&t_ds));
        assert!(is_closed(&OneFormQ::dlog_s(rat(1, 1))));
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_one_form(&OneFormQ::dlog_s(rat(1, 1))).unwrap();
        assert!(d.class_is_zero());
        assert_eq!(d.a_int, BigInt::from(1));
        let f = q(&[(-1, -1, 1, 1)]);
        let d = decompose_one_form(&exterior_derivative(&f)).unwrap();
        assert!(Zero::is_zero(&d.a) && Zero::is_zero(&d.b));
        assert_eq!(d.h, f);
        // dlog(1 − S) = −Σ S^m dlog S, truncated.
        let p = q(&(1..8).map(|m| (m, 0, -1, 1)).collect::<Vec<_>>());
        let w = OneFormQ::from_dlog(&p, &qzero());
        let d = decompose_one_form(&w).unwrap();
        assert!(d.class_is_zero());
        // Term-by-term integration oracle: the potential is −Σ S^m/m.
        let expect = q(&(1..8).map(|m| (m, 0, -1, m)).collect::<Vec<_>>());
        assert_eq!(d.absorbed, expect);
        assert_eq!(dlog_of_unit(0, 0, &q(&[(0, 0, 1, 1), (1, 0, -1, 1)]), 7, 0), w);
        assert!(matches!(decompose_one_form(&OneFormQ { a_s: q(&[(0, 1, 1, 1)]), a_t: qzero() }), Err(DmodError::NotClosed(..))));
    }

    #[test]
    fn pullback_and_image_examples() {
        let mut c = BTreeMap::new();
        c.insert((1, 1), rat(1, 1));
        let w = phi1_pullback(&c);
        assert_eq!(w.a_s, q(&[(-2, -1, -1, 1)]));
        assert_eq!(w.a_t, q(&[(-1, -2, -1, 1)]));
        assert!(in_image_test(&w).unwrap());
        assert!(in_image_test(&w.add(&OneFormQ::dlog_s(rat(1, 1)))).unwrap());
        assert!(!in_image_test(&OneFormQ::dlog_s(rat(1, 2))).unwrap());
        assert!(phi1_pullback(&BTreeMap::new()).is_zero());
        let mut c = BTreeMap::new();
        c.insert((1, 2), rat(3, 1));
        assert_eq!(phi1_pullback(&c), exterior_derivative(&q(&[(-1, -2, 3, 1)])));
        assert!(!in_image_test(&exterior_derivative(&q(&[(-1, 0, 1, 1)]))).unwrap());
        assert!(!in_image_test(&exterior_derivative(&q(&[(2, -1, 1, 1)]))).unwrap());
    }

    fn arb_rational() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_poly(lo: i64, hi: i64) -> impl Strategy<Value = QElem> {
        prop::collection::vec(((lo..=hi), (lo..=hi), arb_rational()), 0..10).prop_map(|v| {
            let mut f = qzero();
            for (a, b, c) in v {
                f.add_term((a, b), &c);
            }
            f
        })
    }

    proptest! {
        #[test]
        fn closed_forms_reassemble(h in arb_poly(-6, 6), a in arb_rational(), b in arb_rational()) {
            let w = exterior_derivative(&h).add(&OneFormQ::dlog_s(a)).add(&OneFormQ::dlog_t(b));
            prop_assert!(is_closed(&w));
            let d = decompose_one_form(&w).unwrap();
            prop_assert_eq!(d.reassemble(), w);
            prop_assert!(d.h.support().all(|k| !in_log_region(k) && k != (0, 0)));
        }

        #[test]
        fn invariant_under_unit_dlogs(h in arb_poly(-6, 6), u in arb_poly(0, 3), sa in -3i64..=3, tb in -3i64..=3) {
            let w = exterior_derivative(&h).add(&OneFormQ::dlog_s(rat(1, 3)));
            let one = QElem::monomial(0, 0, BigRational::one());
            let unit = u.filter(|(a, b)| (a, b) != (0, 0)).add(&one);
            let shifted = w.add(&dlog_of_unit(sa, tb, &unit, 6, 6));
            prop_assert!(is_closed(&shifted));
            let (d1, d2) = (decompose_one_form(&w).unwrap(), decompose_one_form(&shifted).unwrap());
            prop_assert_eq!((d1.a, d1.b, d1.h), (d2.a, d2.b, d2.h));
        }

        #[test]
        fn pullback_image_and_injective(c in prop::collection::btree_map((1i64..=6, 1i64..=6), arb_rational(), 0..8)) {
            let w = phi1_pullback(&c);
            prop_assert!(in_image_test(&w).unwrap());
            let d = decompose_one_form(&w).unwrap();
            let recovered: BTreeMap<(i64, i64), BigRational> = d.h.terms().map(|((a, b), x)| ((-a, -b), x.clone())).collect();
            let nonzero: BTreeMap<(i64, i64), BigRational> = c.into_iter().filter(|(_, x)| !Zero::is_zero(x)).collect();
            prop_assert_eq!(recovered, nonzero);
        }

        #[test]
        fn d_squared_is_zero(f in arb_poly(-6, 6)) {
            prop_assert!(is_closed(&exterior_derivative(&f)));
        }
    }
}
