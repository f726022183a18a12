//! The Artin–Hasse exponential F(t) = exp(−Σ t^{p^e}/p^e), the coordinates
//! (a_{nm}) of a 1-unit as Π F(a_{nm}·T̂^{n·p^m}), and the mod-p inverse
//! α∘dlog.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf::{is_prime, FieldDesc, FieldElem, Field};
use crate::ring::{mod_pow, reduce_rational_mod, Coeff};
use crate::series::{FqSeries, SeriesError, TruncSeries, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AhError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision {0} is too small")]
    PrecisionTooSmall(i64),
    #[error("not a 1-unit")]
    NotOneUnit,
    #[error("coefficient {0} is not p-integral")]
    NotIntegral(BigRational),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Truncated Witt coordinates a_{nm}, p∤n, n·p^m < prec.
#[derive(Debug, Clone, PartialEq)]
pub struct WittCoords {
    pub p: u64,
    pub prec: i64,
    pub entries: BTreeMap<(u64, u32), FieldElem>,
}

/// Coordinates indexed by p∤n, n < prec.
#[derive(Debug, Clone, PartialEq)]
pub struct ModPCoords<R> {
    pub p: u64,
    pub prec: i64,
    pub entries: BTreeMap<u64, R>,
}

impl<R: Coeff> ModPCoords<R> {
    pub fn get(&self, n: u64) -> Option<&R> {
        self.entries.get(&n)
    }

    /// Nonzero entries only.
    pub fn support(&self) -> impl Iterator<Item = (u64, &R)> {
        self.entries.iter().filter(|(_, c)| !c.is_zero()).map(|(n, c)| (*n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|c| c.is_zero())
    }
}

/// Write d = n·p^m with p∤n.
pub fn split_index(d: u64, p: u64) -> (u64, u32) {
    let (mut n, mut m) = (d, 0);
    while n % p == 0 {
        n /= p;
        m += 1;
    }
    (n, m)
}

fn check_prime(p: u64) -> Result<(), AhError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(AhError::NotPrime(p))
    }
}

/// Coefficients of F(t) over Q, exponents 0..n.
pub fn artin_hasse_rational(p: u64, n: usize) -> Result<Vec<BigRational>, AhError> {
    check_prime(p)?;
    // g(t) = −Σ t^{p^e}/p^e; E = exp(g) satisfies n·E_n = Σ k·g_k·E_{n−k}.
    let mut g = vec![BigRational::zero(); n];
    let mut pe: u64 = 1;
    while (pe as usize) < n {
        g[pe as usize] = -BigRational::new(BigInt::one(), BigInt::from(pe));
        pe = match pe.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    let mut e = vec![BigRational::zero(); n];
    if n > 0 {
        e[0] = BigRational::one();
    }
    for k in 1..n {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            if !Zero::is_zero(&g[j]) {
                acc += &g[j] * BigRational::from_integer(BigInt::from(j)) * &e[k - j];
            }
        }
        e[k] = acc / BigRational::from_integer(BigInt::from(k));
    }
    Ok(e)
}

/// F(t) mod p, known mod t^n.
#[allow(non_snake_case)]
pub fn artin_hasse_F(p: u64, n: i64) -> Result<FqSeries, AhError> {
    if n < 2 {
        return Err(AhError::PrecisionTooSmall(n));
    }
    let fp = FieldDesc::prime(p).map_err(|_| AhError::NotPrime(p))?;
    let coeffs = artin_hasse_rational(p, n as usize)?
        .iter()
        .map(|c| {
            reduce_rational_mod(c, p)
                .map(|r| FieldElem::from_int(&fp, r as i64))
                .ok_or_else(|| AhError::NotIntegral(c.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TruncSeries::from_dense(Var::LowerT, 0, coeffs, n, FieldElem::zero(&fp)))
}

/// F(a·T̂^d) mod T̂^n, from the coefficients of F over F_p.
fn substituted(f: &FqSeries, a: &FieldElem, d: u64, n: i64) -> FqSeries {
    let field = a.field();
    let terms = f.terms().filter_map(|(k, c)| {
        let e = k.checked_mul(d as i64)?;
        (e < n).then(|| (e, FieldElem::from_int(field, c.coeffs()[0] as i64).mul(&a.pow(k as u64))))
    });
    TruncSeries::from_terms(Var::That, terms, n, FieldElem::zero(field))
}

/// Π F(a_{nm}·T̂^{n·p^m}) mod T̂^n.
pub fn ah_compose(coords: &WittCoords, field: &Field, n: i64) -> Result<FqSeries, AhError> {
    if field.p() != coords.p {
        return Err(AhError::NotPrime(coords.p));
    }
    let one = FieldElem::one(field);
    let mut acc = TruncSeries::constant(Var::That, one, n);
    if n < 2 {
        return Ok(acc);
    }
    let f = artin_hasse_F(coords.p, n)?;
    for (&(k, m), a) in &coords.entries {
        let d = k * coords.p.pow(m);
        if a.is_zero() || d as i64 >= n {
            continue;
        }
        acc = acc.mul(&substituted(&f, a, d, n));
    }
    Ok(acc)
}

fn is_one_unit<R: Coeff>(u: &TruncSeries<R>) -> bool {
    !u.is_zero() && u.lo() == 0 && u.coeff(0).agrees(&u.zero_coeff().one_like())
}

/// Coordinates with ah_compose(coords) = u mod T̂^n, found by peeling the
/// lowest nonzero exponent.
pub fn ah_decompose(u: &FqSeries, n: i64) -> Result<WittCoords, AhError> {
    if !is_one_unit(u) || u.coeff(0) != u.zero_coeff().one_like() {
        return Err(AhError::NotOneUnit);
    }
    let field = u.zero_coeff().field().clone();
    let p = field.p();
    let n = n.min(u.prec());
    let mut coords = WittCoords {
        p,
        prec: n,
        entries: BTreeMap::new(),
    };
    if n < 2 {
        return Ok(coords);
    }
    let f = artin_hasse_F(p, n)?;
    let mut rest = u.truncate(n);
    for d in 1..n {
        let c = rest.coeff(d);
        if c.is_zero() {
            continue;
        }
        // F(x) ≡ 1 − x, so the factor F(a·T̂^d) contributes −a at T̂^d.
        let a = c.neg();
        let factor = substituted(&f, &a, d as u64, n);
        rest = rest.mul(&factor.invert()?);
        coords.entries.insert(split_index(d as u64, p), a);
    }
    Ok(coords)
}

/// α∘dlog: with T̂·u′/u = Σ b_k T̂^k, the entries −b_k/k for p∤k, k < n.
pub fn alpha_dlog<R: Coeff>(u: &TruncSeries<R>, p: u64, n: i64) -> Result<ModPCoords<R>, AhError> {
    check_prime(p)?;
    if !is_one_unit(u) {
        return Err(AhError::NotOneUnit);
    }
    let dl = u.derivative().mul(&u.invert()?).shift(1);
    let n = n.min(dl.prec());
    let mut entries = BTreeMap::new();
    for k in 1..n.max(1) {
        if k as u64 % p == 0 {
            continue;
        }
        let inv = mod_pow(k as u64 % p, p - 2, p) as i64;
        entries.insert(k as u64, dl.coeff(k).scale_int(-inv));
    }
    Ok(ModPCoords { p, prec: n, entries })
}

/// The right-hand side of the dlog identity: −Σ_{p^e < n} T̂^{p^e}.
pub fn dlog_identity_rhs(p: u64, n: i64) -> Result<FqSeries, AhError> {
    let fp = FieldDesc::prime(p).map_err(|_| AhError::NotPrime(p))?;
    let mut terms = Vec::new();
    let mut pe: i64 = 1;
    while pe < n {
        terms.push((pe, FieldElem::from_int(&fp, -1)));
        pe = pe.saturating_mul(p as i64);
    }
    Ok(TruncSeries::from_terms(Var::That, terms, n, FieldElem::zero(&fp)))
}

/// T̂·F′(T̂)/F(T̂) mod T̂^n.
pub fn dlog_identity_lhs(p: u64, n: i64) -> Result<FqSeries, AhError> {
    let f = artin_hasse_F(p, n)?.with_var(Var::That);
    Ok(f.derivative().mul(&f.invert()?).shift(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;
    use proptest::prelude::*;

    fn mobius(n: u64) -> i64 {
        let (mut n, mut mu, mut d) = (n, 1, 2);
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                mu = -mu;
            }
            d += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }

    fn mul_trunc(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len();
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    }

    /// Π_{p∤k} (1 − t^k)^{μ(k)/k} over Q, via binomial series.
    fn mobius_product(p: u64, n: usize) -> Vec<BigRational> {
        let mut acc = vec![BigRational::zero(); n];
        acc[0] = BigRational::one();
        for k in 1..n as u64 {
            let mu = mobius(k);
            if k % p == 0 || mu == 0 {
                continue;
            }
            let r = rat(mu, k as i64);
            let mut factor = vec![BigRational::zero(); n];
            let mut binom = BigRational::one();
            let mut j = 0usize;
            while (j as u64) * k < n as u64 {
                let sign = if j % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                factor[j * k as usize] = &binom * sign;
                binom = binom * (&r - rat(j as i64, 1)) / rat(j as i64 + 1, 1);
                j += 1;
            }
            acc = mul_trunc(&acc, &factor);
        }
        acc
    }

    #[test]
    fn rational_route_matches_mobius_product() {
        for p in [2, 3, 5, 7] {
            assert_eq!(artin_hasse_rational(p, 24).unwrap(), mobius_product(p, 24), "p = {p}");
        }
    }

    #[test]
    fn small_examples() {
        let f2 = artin_hasse_F(2, 5).unwrap();
        let expect: Vec<i64> = vec![1, 1, 0, 1, 1];
        for (e, c) in expect.iter().enumerate() {
            assert_eq!(f2.coeff(e as i64).coeffs()[0] as i64, *c);
        }
        let f3 = artin_hasse_F(3, 5).unwrap();
        let expect: Vec<i64> = vec![1, 2, 2, 1, 0];
        for (e, c) in expect.iter().enumerate() {
            assert_eq!(f3.coeff(e as i64).coeffs()[0] as i64, *c);
        }
        for p in [2, 3, 5, 11] {
            let f = artin_hasse_F(p, 2).unwrap();
            assert_eq!(f.coeff(1), FieldElem::from_int(&FieldDesc::prime(p).unwrap(), -1));
        }
        assert_eq!(artin_hasse_F(4, 5), Err(AhError::NotPrime(4)));
        assert_eq!(artin_hasse_F(2, 1), Err(AhError::PrecisionTooSmall(1)));
    }

    #[test]
    fn dlog_identity() {
        for p in [2, 3, 5] {
            assert_eq!(dlog_identity_lhs(p, 64).unwrap(), dlog_identity_rhs(p, 64).unwrap());
        }
    }

    #[test]
    fn compose_single_and_disjoint() {
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let w = FieldElem::generator(&f4);
        let mut c = WittCoords { p: 2, prec: 5, entries: BTreeMap::new() };
        assert!(ah_compose(&c, &f4, 5).unwrap().is_one());
        c.entries.insert((1, 0), w.clone());
        let u = ah_compose(&c, &f4, 5).unwrap();
        let f = artin_hasse_F(2, 5).unwrap();
        for e in 0..5 {
            let fe = FieldElem::from_int(&f4, f.coeff(e).coeffs()[0] as i64);
            assert_eq!(u.coeff(e), fe.mul(&w.pow(e as u64)));
        }
        let mut c2 = WittCoords { p: 2, prec: 8, entries: BTreeMap::new() };
        c2.entries.insert((3, 0), FieldElem::one(&f4));
        let mut both = c2.clone();
        both.entries.insert((1, 0), w.clone());
        c.prec = 8;
        let prod = ah_compose(&c, &f4, 8).unwrap().mul(&ah_compose(&c2, &f4, 8).unwrap());
        assert_eq!(ah_compose(&both, &f4, 8).unwrap(), prod);
    }

    #[test]
    fn decompose_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let one = TruncSeries::constant(Var::That, FieldElem::one(&f2), 8);
        assert!(ah_decompose(&one, 8).unwrap().entries.is_empty());
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let w = FieldElem::generator(&f4);
        let mut c = WittCoords { p: 2, prec: 12, entries: BTreeMap::new() };
        c.entries.insert((3, 0), w.clone());
        let u = ah_compose(&c, &f4, 12).unwrap();
        assert_eq!(ah_decompose(&u, 12).unwrap(), c);
        let u = TruncSeries::from_terms(Var::That, [(0, FieldElem::one(&f2)), (1, FieldElem::one(&f2))], 8, FieldElem::zero(&f2));
        let d = ah_decompose(&u, 8).unwrap();
        assert_eq!(ah_compose(&d, &f2, 8).unwrap(), u);
        let bad = TruncSeries::constant(Var::That, FieldElem::from_int(&f2, 0), 8);
        assert_eq!(ah_decompose(&bad, 8), Err(AhError::NotOneUnit));
    }

    #[test]
    fn alpha_dlog_inverts_single_factor() {
        let f9 = FieldDesc::standard(3, 2).unwrap();
        let a = FieldElem::generator(&f9).add(&FieldElem::one(&f9));
        for n in [1u64, 2, 4, 5] {
            let mut c = WittCoords { p: 3, prec: 20, entries: BTreeMap::new() };
            c.entries.insert((n, 0), a.clone());
            let u = ah_compose(&c, &f9, 20).unwrap();
            let al = alpha_dlog(&u, 3, 20).unwrap();
            let support: Vec<_> = al.support().collect();
            assert_eq!(support, vec![(n, &a)]);
        }
    }

    #[test]
    fn alpha_dlog_of_canonical_member() {
        for p in [2u64, 3] {
            let fp = FieldDesc::prime(p).unwrap();
            let m = 48;
            let one = FqSeries::constant(Var::T, FieldElem::one(&fp), m);
            let tinv = FqSeries::monomial(Var::T, -1, FieldElem::from_int(&fp, -1), m);
            let u = TruncSeries::from_terms(Var::That, [(0, one), (1, tinv)], 24, FqSeries::zero(Var::T, m, FieldElem::zero(&fp)));
            let al = alpha_dlog(&u, p, 24).unwrap();
            for (n, c) in &al.entries {
                let inv_n = FieldElem::from_int(&fp, *n as i64).inverse().unwrap();
                let expect = FqSeries::monomial(Var::T, -(*n as i64), inv_n, m);
                assert!(c.agrees(&expect) && c.prec() > 0, "p={p} n={n}");
            }
        }
    }

    fn one_unit(field: &Field, coeffs: &[u64], n: i64) -> FqSeries {
        let terms = std::iter::once((0, FieldElem::one(field)))
            .chain(coeffs.iter().enumerate().map(|(i, &x)| (i as i64 + 1, FieldElem::from_index(field, x % field.q()))));
        TruncSeries::from_terms(Var::That, terms, n, FieldElem::zero(field))
    }

    proptest! {
        #[test]
        fn round_trip(coeffs in prop::collection::vec(0u64..9, 15), which in 0usize..3) {
            let field = [FieldDesc::prime(2), FieldDesc::standard(2, 2), FieldDesc::standard(3, 2)][which].clone().unwrap();
            let u = one_unit(&field, &coeffs, 16);
            let c = ah_decompose(&u, 16).unwrap();
            prop_assert_eq!(ah_compose(&c, &field, 16).unwrap(), u);
        }

        #[test]
        fn alpha_dlog_is_a_homomorphism(a in prop::collection::vec(0u64..9, 15), b in prop::collection::vec(0u64..9, 15)) {
            let field = FieldDesc::standard(3, 2).unwrap();
            let (u, v) = (one_unit(&field, &a, 16), one_unit(&field, &b, 16));
            let (x, y, xy) = (alpha_dlog(&u, 3, 16).unwrap(), alpha_dlog(&v, 3, 16).unwrap(), alpha_dlog(&u.mul(&v), 3, 16).unwrap());
            for (n, c) in &xy.entries {
                prop_assert_eq!(c, &x.entries[n].add(&y.entries[n]));
            }
        }

        #[test]
        fn alpha_dlog_kills_pth_powers(a in prop::collection::vec(0u64..4, 15)) {
            let field = FieldDesc::standard(2, 2).unwrap();
            let u = one_unit(&field, &a, 16);
            prop_assert!(alpha_dlog(&u.pow(2), 2, 16).unwrap().is_zero());
        }
    }
}
