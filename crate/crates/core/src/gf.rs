//! Exact arithmetic in F_q = F_p[w]/(modulus), the map x ↦ x^q − x, and the
//! twisted group algebra F_q[Gal(F_q/F_p)].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ring::{mod_pow, Coeff};

/// Fields with more elements than this are rejected.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {0} exceeds the supported bound 2^16")]
    TooLarge(u128),
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    BadModulus { expected: usize, got: usize },
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("malformed field spec {0:?}")]
    Parse(String),
    #[error("{0} is not a power of the characteristic {1}")]
    NotCharPower(u64, u64),
}

/// Description of F_{p^n} in polynomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    n: usize,
    /// Modulus coefficients from the constant term upward; monic, length n + 1.
    modulus: Vec<u64>,
}

pub type Field = Arc<FieldDesc>;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDesc {
    /// Build F_{p^n} from a monic modulus given highest degree first, as in
    /// the CLI spec string (`2^2:1,1,1` is w² + w + 1).
    pub fn new(p: u64, n: usize, modulus_high_first: &[u64]) -> Result<Field, GfError> {
        Self::check_size(p, n)?;
        if modulus_high_first.len() != n + 1 || modulus_high_first[0] % p != 1 {
            return Err(GfError::BadModulus {
                expected: n,
                got: modulus_high_first.len(),
            });
        }
        let modulus: Vec<u64> = modulus_high_first.iter().rev().map(|c| c % p).collect();
        if !is_irreducible(p, &modulus) {
            return Err(GfError::Reducible(p));
        }
        Ok(Arc::new(FieldDesc { p, n, modulus }))
    }

    pub fn prime(p: u64) -> Result<Field, GfError> {
        Self::check_size(p, 1)?;
        Ok(Arc::new(FieldDesc {
            p,
            n: 1,
            modulus: vec![0, 1],
        }))
    }

    /// F_{p^n} with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared from the leading term down).
    pub fn standard(p: u64, n: usize) -> Result<Field, GfError> {
        Self::check_size(p, n)?;
        if n == 1 {
            return Self::prime(p);
        }
        let count = p.pow(n as u32);
        for idx in 0..count {
            // idx enumerates the n lower coefficients, most significant = degree n-1.
            let mut low = vec![0u64; n];
            let mut rest = idx;
            for slot in low.iter_mut() {
                *slot = rest % p;
                rest /= p;
            }
            let mut modulus = low;
            modulus.push(1);
            if is_irreducible(p, &modulus) {
                return Ok(Arc::new(FieldDesc { p, n, modulus }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Parse `p`, `p^n`, or `p^n:c_n,...,c_0`.
    pub fn parse(spec: &str) -> Result<Field, GfError> {
        let err = || GfError::Parse(spec.to_string());
        let (size, modulus) = match spec.split_once(':') {
            Some((s, m)) => (s.trim(), Some(m.trim())),
            None => (spec.trim(), None),
        };
        let (p, n) = match size.split_once('^') {
            Some((p, n)) => (
                p.trim().parse::<u64>().map_err(|_| err())?,
                n.trim().parse::<usize>().map_err(|_| err())?,
            ),
            None => (size.parse::<u64>().map_err(|_| err())?, 1),
        };
        match modulus {
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| err()))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(p, n, &coeffs)
            }
            None => Self::standard(p, n),
        }
    }

    fn check_size(p: u64, n: usize) -> Result<(), GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(GfError::TooLarge(q));
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.n as u32)
    }

    /// Modulus coefficients, highest degree first.
    pub fn modulus_high_first(&self) -> Vec<u64> {
        self.modulus.iter().rev().copied().collect()
    }

    /// The `p^n:...` spec string that reproduces this field.
    pub fn spec_string(&self) -> String {
        let m: Vec<String> = self.modulus_high_first().iter().map(u64::to_string).collect();
        format!("{}^{}:{}", self.p, self.n, m.join(","))
    }
}

/// Exhaustive search for a monic factor of degree 1..=deg/2.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut cand = vec![0u64; d + 1];
            let mut rest = idx;
            for slot in cand.iter_mut().take(d) {
                *slot = rest % p;
                rest /= p;
            }
            cand[d] = 1;
            if poly_rem(p, modulus, &cand).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` (low-first vectors).
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = r.pop().unwrap_or(0) % p;
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &mc) in m.iter().take(dm).enumerate() {
                r[off + i] = (r[off + i] + p - lead * mc % p) % p;
            }
        }
    }
    r
}

/// An element of F_q in polynomial basis.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    coeffs: Vec<u64>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl FieldElem {
    pub fn zero(field: &Field) -> Self {
        FieldElem {
            field: field.clone(),
            coeffs: vec![0; field.n],
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, k: i64) -> Self {
        let p = field.p as i64;
        let mut e = Self::zero(field);
        e.coeffs[0] = k.rem_euclid(p) as u64;
        e
    }

    /// Element with the given polynomial-basis coordinates (constant first).
    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Self {
        let mut e = Self::zero(field);
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c % field.p;
        }
        e
    }

    /// The class of w, the adjoined root of the modulus.
    pub fn generator(field: &Field) -> Self {
        let mut x = vec![0u64; 2];
        x[1] = 1;
        Self::reduce(field, x)
    }

    /// Element number `idx` in the base-p enumeration of coordinates.
    pub fn from_index(field: &Field, mut idx: u64) -> Self {
        let mut e = Self::zero(field);
        for slot in e.coeffs.iter_mut() {
            *slot = idx % field.p;
            idx /= field.p;
        }
        e
    }

    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.field.p + c)
    }

    /// All q elements in index order.
    pub fn all(field: &Field) -> impl Iterator<Item = FieldElem> + '_ {
        (0..field.q()).map(move |i| Self::from_index(field, i))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn reduce(field: &Field, poly: Vec<u64>) -> Self {
        let mut r = poly_rem(field.p, &poly, &field.modulus);
        r.resize(field.n, 0);
        FieldElem {
            field: field.clone(),
            coeffs: r,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Coeff::pow(self, self.field.q() - 2))
        }
    }

    /// The p-power Frobenius σ.
    pub fn frobenius(&self) -> Self {
        Coeff::pow(self, self.field.p)
    }

    /// σ^e.
    pub fn frobenius_iter(&self, e: usize) -> Self {
        (0..e).fold(self.clone(), |x, _| x.frobenius())
    }
}

impl Coeff for FieldElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        FieldElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        FieldElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
    fn neg(&self) -> Self {
        let p = self.field.p;
        FieldElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| (p - a) % p).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        let n = self.field.n;
        if n == 1 {
            return FieldElem {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0] * rhs.coeffs[0] % p],
            };
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        Self::reduce(&self.field, prod)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_int(&self.field, n)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inverse()
    }
}

/// x ↦ x^p.
pub fn frobenius(x: &FieldElem) -> FieldElem {
    x.frobenius()
}

/// Every x in the field of `a` with x^q − x = a, found by exhaustive search.
/// `q` must be a power of the characteristic.
pub fn solve_wp_q(a: &FieldElem, q: u64) -> Result<Vec<FieldElem>, GfError> {
    let p = a.field.p;
    let mut t = q;
    while t > 1 && t % p == 0 {
        t /= p;
    }
    if t != 1 || q < p {
        return Err(GfError::NotCharPower(q, p));
    }
    Ok(FieldElem::all(&a.field)
        .filter(|x| x.pow(q).sub(x) == *a)
        .collect())
}

/// An element Σ a_e σ^e of F_q[Gal(F_q/F_p)], σ the p-power Frobenius.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedElem {
    coeffs: Vec<FieldElem>,
}

impl TwistedElem {
    pub fn new(coeffs: Vec<FieldElem>) -> Self {
        assert!(!coeffs.is_empty(), "twisted element needs n slots");
        let n = coeffs[0].field.n;
        assert_eq!(coeffs.len(), n, "twisted element needs exactly n slots");
        TwistedElem { coeffs }
    }

    /// a·σ^e.
    pub fn monomial(a: FieldElem, e: usize) -> Self {
        let n = a.field.n;
        let mut coeffs = vec![a.zero_like(); n];
        coeffs[e % n] = a;
        TwistedElem { coeffs }
    }

    pub fn identity(field: &Field) -> Self {
        Self::monomial(FieldElem::one(field), 0)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        TwistedElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// The natural action on F_q: (Σ a_e σ^e)(x) = Σ a_e x^{p^e}.
    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .enumerate()
            .fold(x.zero_like(), |acc, (e, a)| acc.add(&a.mul(&x.frobenius_iter(e))))
    }
}

/// Product in the twisted group algebra: (aσ^e)(bσ^f) = a·σ^e(b)·σ^{e+f}.
pub fn twisted_mul(a: &TwistedElem, b: &TwistedElem) -> TwistedElem {
    let n = a.coeffs.len();
    let mut out = vec![a.coeffs[0].zero_like(); n];
    for (e, ae) in a.coeffs.iter().enumerate() {
        if ae.is_zero() {
            continue;
        }
        for (f, bf) in b.coeffs.iter().enumerate() {
            if bf.is_zero() {
                continue;
            }
            let term = ae.mul(&bf.frobenius_iter(e));
            out[(e + f) % n] = out[(e + f) % n].add(&term);
        }
    }
    TwistedElem { coeffs: out }
}

/// Finite coordinate vector over F_q with coordinates labelled by `K`.
pub type CoordVec<K> = BTreeMap<K, FieldElem>;

/// Rank over F_q of the vectors σ^e(v) for every class v and 0 ≤ e < n,
/// where `twist` realises σ on coordinate vectors. The classes generate a
/// free F_q[Gal]-module of rank r exactly when this equals n·r.
pub fn semilinear_rank<K, F>(classes: &[CoordVec<K>], field: &Field, twist: F) -> usize
where
    K: Ord + Clone,
    F: Fn(&CoordVec<K>) -> CoordVec<K>,
{
    let mut rows = Vec::new();
    for class in classes {
        let mut v = class.clone();
        for _ in 0..field.n {
            rows.push(v.clone());
            v = twist(&v);
        }
    }
    rank_fq(&rows)
}

/// Rank over F_q of a family of sparse coordinate vectors.
pub fn rank_fq<K: Ord + Clone>(rows: &[CoordVec<K>]) -> usize {
    let keys: Vec<K> = rows
        .iter()
        .flat_map(|r| r.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut mat: Vec<Vec<FieldElem>> = Vec::with_capacity(rows.len());
    let Some(zero) = rows.iter().flat_map(|r| r.values()).next().map(|x| x.zero_like()) else {
        return 0;
    };
    for r in rows {
        mat.push(
            keys.iter()
                .map(|k| r.get(k).cloned().unwrap_or_else(|| zero.clone()))
                .collect(),
        );
    }
    let mut rank = 0;
    for col in 0..keys.len() {
        let Some(piv) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, piv);
        let inv = mat[rank][col].inverse().expect("nonzero pivot");
        let pivot_row: Vec<FieldElem> = mat[rank].iter().map(|x| x.mul(&inv)).collect();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&factor.mul(y));
                }
            }
        }
        mat[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Rank over F_p of vectors with entries in F_p (entries reduced mod p).
pub fn rank_fp(p: u64, rows: &[Vec<u64>]) -> usize {
    let mut mat: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = mat.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..mat.len()).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(rank, piv);
        let inv = mod_pow(mat[rank][col], p - 2, p);
        for x in mat[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
