//! The Lubin–Tate module for f(X) = T·X + X^q over K = F_q((T)): formal
//! multiplication [u], the torsion tower α_1, α_2, … with f(α_{j+1}) = α_j,
//! the Lang-isogeny fiber identity and the Galois action σ_u(α_j) = [u](α_j).
//!
//! The level-m ring L_m is K[x_1, …, x_m] modulo x_1^{q−1} = −T and
//! x_j^q = x_{j−1} − T·x_j (j ≥ 2), stored in the monomial basis
//! x_1^{e_1}…x_m^{e_m} with e_1 < q−1 and e_j < q.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElem};
use crate::poly::Monic;
use crate::ring::Coeff;
use crate::series::{FqSeries, TruncSeries, Var};

/// Largest q^m accepted by [`build_tower`].
pub const MAX_TOWER_SIZE: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtError {
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("q^m = {0} exceeds {MAX_TOWER_SIZE}")]
    TooLarge(u64),
    #[error("base precision {0} is too small to certify the torsion points")]
    PrecisionTooLow(i64),
    #[error("not a unit of O_K")]
    NotUnit,
    #[error("level {level} is not in a tower of height {height}")]
    BadLevel { level: usize, height: usize },
}

/// Shape of L_m: the field, q, the height m and base precision M.
#[derive(Debug, PartialEq, Eq)]
pub struct TowerRing {
    field: Field,
    q: u64,
    m: usize,
    prec: i64,
    degrees: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl TowerRing {
    pub fn new(field: &Field, m: usize, prec: i64) -> Arc<Self> {
        let q = field.q() as usize;
        let degrees: Vec<usize> = (0..m).map(|j| if j == 0 { q - 1 } else { q }).collect();
        let mut strides = Vec::with_capacity(m);
        let mut s = 1;
        for d in &degrees {
            strides.push(s);
            s *= d;
        }
        Arc::new(TowerRing {
            field: field.clone(),
            q: q as u64,
            m,
            prec,
            degrees,
            strides,
            dim: s,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn height(&self) -> usize {
        self.m
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    /// [L_m : K].
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn exponents(&self, idx: usize) -> Vec<usize> {
        self.degrees.iter().zip(&self.strides).map(|(d, s)| (idx / s) % d).collect()
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    fn zero_scalar(&self) -> FqSeries {
        FqSeries::zero(Var::T, self.prec, FieldElem::zero(&self.field))
    }

    fn minus_t(&self, c: &FqSeries) -> FqSeries {
        c.shift(1).neg().truncate(self.prec)
    }

    /// Rewrite exponent vectors into the monomial basis.
    fn reduce(&self, mut terms: BTreeMap<Vec<usize>, FqSeries>) -> Vec<FqSeries> {
        let add = |map: &mut BTreeMap<Vec<usize>, FqSeries>, k: Vec<usize>, c: FqSeries| {
            let slot = map.entry(k).or_insert_with(|| self.zero_scalar());
            *slot = slot.add(&c);
        };
        for j in (0..self.m).rev() {
            loop {
                let over: Vec<Vec<usize>> = terms.keys().filter(|e| e[j] >= self.degrees[j]).cloned().collect();
                if over.is_empty() {
                    break;
                }
                for e in over {
                    let c = terms.remove(&e).expect("key present");
                    let mut base = e.clone();
                    base[j] -= self.degrees[j];
                    if j == 0 {
                        add(&mut terms, base, self.minus_t(&c));
                    } else {
                        let mut lower = base.clone();
                        lower[j - 1] += 1;
                        add(&mut terms, lower, c.clone());
                        let mut same = base;
                        same[j] += 1;
                        add(&mut terms, same, self.minus_t(&c));
                    }
                }
            }
        }
        let mut coords = vec![self.zero_scalar(); self.dim];
        for (e, c) in terms {
            let i = self.index(&e);
            coords[i] = coords[i].add(&c).truncate(self.prec);
        }
        coords
    }
}

/// An element of L_m.
#[derive(Clone)]
pub struct TowerElem {
    ring: Arc<TowerRing>,
    coords: Vec<FqSeries>,
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                m.entry(&self.ring.exponents(i), c);
            }
        }
        m.finish()
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = self
                .ring
                .exponents(i)
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(j, e)| if *e == 1 { format!("x{}", j + 1) } else { format!("x{}^{e}", j + 1) })
                .collect();
            let c = crate::series::literal::format_series(c);
            let c = c.split(" (mod").next().unwrap_or_default().to_string();
            if mono.is_empty() {
                parts.push(format!("({c})"));
            } else {
                parts.push(format!("({c})*{}", mono.join("*")));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl TowerElem {
    pub fn scalar(ring: &Arc<TowerRing>, c: FqSeries) -> Self {
        let mut coords = vec![ring.zero_scalar(); ring.dim];
        coords[0] = c.truncate(ring.prec);
        TowerElem { ring: ring.clone(), coords }
    }

    pub fn from_field(ring: &Arc<TowerRing>, c: &FieldElem) -> Self {
        Self::scalar(ring, FqSeries::constant(Var::T, c.clone(), ring.prec))
    }

    /// The basis monomial x_1^{e_1}…x_m^{e_m}, reduced if needed.
    pub fn monomial(ring: &Arc<TowerRing>, e: &[usize]) -> Self {
        let one = FqSeries::constant(Var::T, FieldElem::one(&ring.field), ring.prec);
        let mut map = BTreeMap::new();
        map.insert(e.to_vec(), one);
        TowerElem {
            ring: ring.clone(),
            coords: ring.reduce(map),
        }
    }

    /// The generator x_j, 1 ≤ j ≤ m.
    pub fn generator(ring: &Arc<TowerRing>, j: usize) -> Self {
        let mut e = vec![0; ring.m];
        e[j - 1] = 1;
        Self::monomial(ring, &e)
    }

    pub fn from_coords(ring: &Arc<TowerRing>, coords: Vec<FqSeries>) -> Self {
        assert_eq!(coords.len(), ring.dim, "coordinate length must equal [L_m : K]");
        TowerElem { ring: ring.clone(), coords }
    }

    pub fn ring(&self) -> &Arc<TowerRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[FqSeries] {
        &self.coords
    }

    /// True iff only the constant coordinate is nonzero.
    pub fn is_scalar(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    fn map(&self, f: impl Fn(&FqSeries) -> FqSeries) -> Self {
        TowerElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &FqSeries) -> Self {
        let prec = self.ring.prec;
        self.map(|x| c.mul(x).truncate(prec))
    }
}

impl Coeff for TowerElem {
    fn zero_like(&self) -> Self {
        self.map(|_| self.ring.zero_scalar())
    }
    fn one_like(&self) -> Self {
        Self::from_field(&self.ring, &FieldElem::one(&self.ring.field))
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        TowerElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.add(b)).collect(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        TowerElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.sub(b)).collect(),
        }
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut map: BTreeMap<Vec<usize>, FqSeries> = BTreeMap::new();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ei = self.ring.exponents(i);
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e: Vec<usize> = ei.iter().zip(self.ring.exponents(j)).map(|(x, y)| x + y).collect();
                let slot = map.entry(e).or_insert_with(|| self.ring.zero_scalar());
                *slot = slot.add(&a.mul(b));
            }
        }
        TowerElem {
            ring: self.ring.clone(),
            coords: self.ring.reduce(map),
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_field(&self.ring, &FieldElem::from_int(&self.ring.field, n))
    }
    /// Only scalars are inverted.
    fn try_inv(&self) -> Option<Self> {
        if !self.is_scalar() {
            return None;
        }
        Some(Self::scalar(&self.ring, self.coords[0].invert().ok()?))
    }
    fn agrees(&self, other: &Self) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a.agrees(b))
    }
    fn scale_int(&self, n: i64) -> Self {
        self.map(|c| c.scale_int(n))
    }
}

/// An additive series in X with coefficients in truncated K.
pub type XSeries = TruncSeries<FqSeries>;

/// f(P) = T·P + P^q, truncated at X^{x_prec}.
pub fn apply_f(p: &XSeries, q: u64, x_prec: i64) -> XSeries {
    p.map_coeffs(|c| c.shift(1).truncate(c.prec()))
        .add(&p.pow(q).truncate(x_prec))
        .truncate(x_prec)
}

/// [u](X) = Σ b_k·f^{∘k}(X) mod X^{x_prec}, for u = Σ b_k T^k known mod T^M.
pub fn formal_mult(u: &FqSeries, x_prec: i64) -> XSeries {
    let field = u.zero_coeff().field().clone();
    let q = field.q();
    let m = u.prec();
    let zero = FqSeries::zero(Var::T, m, FieldElem::zero(&field));
    let mut p = XSeries::monomial(Var::X, 1, FqSeries::constant(Var::T, FieldElem::one(&field), m), x_prec);
    let mut acc = XSeries::zero(Var::X, x_prec, zero);
    for k in 0..m.max(0) {
        let b = u.coeff(k);
        if !b.is_zero() {
            acc = acc.add(&p.map_coeffs(|c| c.scale_field(&b)));
        }
        p = apply_f(&p, q, x_prec);
    }
    acc
}

trait ScaleField {
    fn scale_field(&self, c: &FieldElem) -> Self;
}

impl ScaleField for FqSeries {
    fn scale_field(&self, c: &FieldElem) -> Self {
        self.map_coeffs(|x| c.mul(x))
    }
}

/// Σ c_e(T)·x^e in L_m.
pub fn evaluate(s: &XSeries, x: &TowerElem) -> TowerElem {
    let mut acc = x.zero_like();
    for (e, c) in s.terms() {
        acc = acc.add(&x.pow(e as u64).scale(c));
    }
    acc
}

/// f(x) = T·x + x^q in L_m.
pub fn f_tower(x: &TowerElem) -> TowerElem {
    let ring = x.ring();
    x.scale(&FqSeries::uniformizer(&ring.field, ring.prec + 1)).add(&x.pow(ring.q))
}

#[derive(Debug, Clone)]
pub struct LtTower {
    pub ring: Arc<TowerRing>,
    /// α_1, …, α_m.
    pub alphas: Vec<TowerElem>,
    pub eisenstein: bool,
    pub torsion_certified: bool,
}

impl LtTower {
    pub fn height(&self) -> usize {
        self.ring.m
    }

    pub fn alpha(&self, j: usize) -> &TowerElem {
        &self.alphas[j - 1]
    }

    /// The same tower with α_j replaced by α_j + delta.
    pub fn perturbed(&self, j: usize, delta: &TowerElem) -> LtTower {
        let mut out = self.clone();
        out.alphas[j - 1] = out.alphas[j - 1].add(delta);
        out
    }
}

/// The level-m tower over K known mod T^prec.
pub fn build_tower(m: usize, field: &Field, prec: i64) -> Result<LtTower, LtError> {
    if m == 0 {
        return Err(LtError::ZeroLevel);
    }
    let q = field.q();
    let size = q.checked_pow(m as u32).unwrap_or(u64::MAX);
    if size > MAX_TOWER_SIZE {
        return Err(LtError::TooLarge(size));
    }
    if prec < 2 {
        return Err(LtError::PrecisionTooLow(prec));
    }
    let ring = TowerRing::new(field, m, prec);
    let alphas: Vec<TowerElem> = (1..=m).map(|j| TowerElem::generator(&ring, j)).collect();
    let mut lower = vec![FqSeries::zero(Var::T, prec, FieldElem::zero(field)); q as usize - 1];
    lower[0] = FqSeries::uniformizer(field, prec);
    let eisenstein = Monic::new(lower).is_eisenstein(|c| c.valuation().ok());
    let mut torsion_certified = true;
    for (j, a) in alphas.iter().enumerate() {
        let mut x = a.clone();
        for _ in 0..j {
            x = f_tower(&x);
        }
        let nonzero = !x.is_zero();
        let killed = f_tower(&x).is_zero();
        torsion_certified &= nonzero && killed;
    }
    if !torsion_certified {
        return Err(LtError::PrecisionTooLow(prec));
    }
    Ok(LtTower {
        ring,
        alphas,
        eisenstein,
        torsion_certified,
    })
}

/// Σ_{j<m} α_{j+1}·T̂^j.
pub fn fiber_series(tower: &LtTower, m: usize) -> TruncSeries<TowerElem> {
    let zero = tower.alphas[0].zero_like();
    TruncSeries::from_terms(
        Var::That,
        (0..m).map(|j| (j as i64, tower.alphas[j].clone())),
        m as i64,
        zero,
    )
}

/// F(g) = (−T + T̂)·g mod T̂^m with F the q-power on coefficients.
pub fn verify_fiber(tower: &LtTower, m: usize) -> Result<bool, LtError> {
    if m == 0 || m > tower.height() {
        return Err(LtError::BadLevel { level: m, height: tower.height() });
    }
    let ring = &tower.ring;
    let g = fiber_series(tower, m);
    let lhs = crate::series::coeff_frobenius(&g, ring.q);
    let minus_t = TowerElem::scalar(ring, FqSeries::monomial(Var::T, 1, FieldElem::from_int(&ring.field, -1), ring.prec));
    let one = minus_t.one_like();
    let factor = TruncSeries::from_terms(Var::That, [(0, minus_t), (1, one)], m as i64, g.zero_coeff().clone());
    let rhs = factor.mul(&g);
    Ok(lhs.agrees_with(&rhs) && rhs.agrees_with(&lhs))
}

fn check_unit(u: &FqSeries) -> Result<(), LtError> {
    if u.is_zero() || u.lo() != 0 {
        return Err(LtError::NotUnit);
    }
    Ok(())
}

/// Images σ_u(x_j) = [u](α_j), j = 1..m.
pub fn galois_images(u: &FqSeries, tower: &LtTower) -> Result<Vec<TowerElem>, LtError> {
    check_unit(u)?;
    let ring = &tower.ring;
    let m = ring.m;
    let u = u.truncate(m as i64);
    let u = FqSeries::from_terms(Var::T, u.terms().map(|(e, c)| (e, c.clone())), ring.prec, FieldElem::zero(&ring.field));
    let x_prec = ring.q.pow(m as u32 - 1) as i64 + 1;
    let mult = formal_mult(&u, x_prec);
    Ok(tower.alphas.iter().map(|a| evaluate(&mult, a)).collect())
}

/// σ_u(x): the ring map fixing K with x_j ↦ [u](α_j).
pub fn galois_act(u: &FqSeries, x: &TowerElem, tower: &LtTower) -> Result<TowerElem, LtError> {
    let images = galois_images(u, tower)?;
    let ring = &tower.ring;
    let mut acc = x.zero_like();
    for (i, c) in x.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut term = TowerElem::scalar(ring, c.clone());
        for (j, e) in ring.exponents(i).into_iter().enumerate() {
            if e > 0 {
                term = term.mul(&images[j].pow(e as u64));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Σ_j σ_u(α_{j+1})·T̂^j = u(T̂)·Σ_j α_{j+1}·T̂^j mod T̂^m.
pub fn galois_series_identity(u: &FqSeries, tower: &LtTower, m: usize) -> Result<bool, LtError> {
    if m == 0 || m > tower.height() {
        return Err(LtError::BadLevel { level: m, height: tower.height() });
    }
    let images = galois_images(u, tower)?;
    let ring = &tower.ring;
    let g = fiber_series(tower, m);
    let zero = g.zero_coeff().clone();
    let lhs = TruncSeries::from_terms(Var::That, (0..m).map(|j| (j as i64, images[j].clone())), m as i64, zero.clone());
    let u_hat = TruncSeries::from_terms(
        Var::That,
        u.terms().map(|(k, c)| (k, TowerElem::from_field(ring, c))),
        m as i64,
        zero,
    );
    let rhs = u_hat.mul(&g);
    Ok(lhs.agrees_with(&rhs) && rhs.agrees_with(&lhs))
}

/// All units of (O_K/T^m)^× as polynomials of degree < m.
pub fn units_mod(field: &Field, m: usize) -> Vec<FqSeries> {
    let q = field.q();
    let count = q.pow(m as u32);
    (0..count)
        .filter_map(|mut idx| {
            let mut terms = Vec::new();
            for k in 0..m {
                terms.push((k as i64, FieldElem::from_index(field, idx % q)));
                idx /= q;
            }
            let u = FqSeries::from_terms(Var::T, terms, m as i64, FieldElem::zero(field));
            (!u.is_zero() && u.lo() == 0).then_some(u)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;
    use crate::series::literal::fq_series;
    use proptest::prelude::*;

    fn t_series(src: &str, field: &Field, prec: i64) -> FqSeries {
        fq_series(src, Var::T, field, Some(prec)).unwrap()
    }

    #[test]
    fn formal_mult_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let one = t_series("1", &f2, 6);
        let m1 = formal_mult(&one, 9);
        assert_eq!(m1.terms().map(|(e, c)| (e, c.clone())).collect::<Vec<_>>(), vec![(1, t_series("1", &f2, 6))]);
        let mt = formal_mult(&t_series("T", &f2, 6), 9);
        assert!(mt.coeff(1).agrees(&t_series("T", &f2, 6)));
        assert!(mt.coeff(2).is_one());
        assert_eq!(mt.terms().count(), 2);
        let m = formal_mult(&t_series("1 + T", &f2, 2), 3);
        assert!(m.coeff(1).agrees(&t_series("1 + T", &f2, 2)));
        assert!(m.coeff(2).is_one());
    }

    #[test]
    fn tower_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let t1 = build_tower(1, &f2, 8).unwrap();
        assert_eq!(t1.ring.dim(), 1);
        assert!(t1.alpha(1).is_scalar());
        assert!(t1.alpha(1).coords()[0].agrees(&t_series("T", &f2, 8)));
        let t2 = build_tower(2, &f2, 8).unwrap();
        let a2 = t2.alpha(2);
        let tt = TowerElem::scalar(&t2.ring, t_series("T", &f2, 8));
        assert!(a2.mul(a2).add(&tt.mul(a2)).add(&tt).is_zero());
        let f3 = FieldDesc::prime(3).unwrap();
        let t = build_tower(1, &f3, 8).unwrap();
        assert_eq!(t.ring.dim(), 2);
        let a1 = t.alpha(1);
        let minus_t = TowerElem::scalar(&t.ring, t_series("2*T", &f3, 8));
        assert_eq!(a1.mul(a1), minus_t);
        assert!(t.eisenstein && t.torsion_certified);
        assert_eq!(build_tower(0, &f2, 8).unwrap_err(), LtError::ZeroLevel);
        assert_eq!(build_tower(7, &f2, 8).unwrap_err(), LtError::TooLarge(128));
        assert_eq!(build_tower(1, &f2, 1).unwrap_err(), LtError::PrecisionTooLow(1));
    }

    #[test]
    fn fiber_identity_and_perturbation() {
        for (p, n, m) in [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2), (2, 2, 2)] {
            let field = FieldDesc::standard(p, n).unwrap();
            let t = build_tower(m, &field, 10).unwrap();
            for level in 1..=m {
                assert!(verify_fiber(&t, level).unwrap(), "q={} m={m}", field.q());
            }
        }
        let f2 = FieldDesc::prime(2).unwrap();
        let t = build_tower(2, &f2, 10).unwrap();
        let one = t.alpha(1).one_like();
        assert!(!verify_fiber(&t.perturbed(2, &one), 2).unwrap());
    }

    #[test]
    fn galois_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let t = build_tower(2, &f2, 10).unwrap();
        let a2 = t.alpha(2).clone();
        assert_eq!(galois_act(&t_series("1", &f2, 2), &a2, &t).unwrap(), a2);
        let s = galois_act(&t_series("1 + T", &f2, 2), &a2, &t).unwrap();
        let tt = TowerElem::scalar(&t.ring, t_series("T", &f2, 10));
        assert_eq!(s, a2.add(&tt));
        assert!(s.mul(&s).add(&tt.mul(&s)).add(&tt).is_zero());
        let units = units_mod(&f2, 2);
        for u in &units {
            for v in &units {
                let uv = u.mul(v);
                let lhs = galois_act(u, &galois_act(v, &a2, &t).unwrap(), &t).unwrap();
                assert_eq!(lhs, galois_act(&uv, &a2, &t).unwrap());
            }
        }
        assert_eq!(galois_act(&t_series("T", &f2, 2), &a2, &t), Err(LtError::NotUnit));
    }

    #[test]
    fn series_identity_exhaustive() {
        for (p, m) in [(2u64, 2usize), (2, 3), (3, 1), (3, 2)] {
            let field = FieldDesc::prime(p).unwrap();
            let t = build_tower(m, &field, 10).unwrap();
            for u in units_mod(&field, m) {
                assert!(galois_series_identity(&u, &t, m).unwrap());
            }
        }
    }

    #[test]
    fn fixed_field_is_base() {
        let f2 = FieldDesc::prime(2).unwrap();
        let t = build_tower(2, &f2, 4).unwrap();
        let units = units_mod(&f2, 2);
        for idx in 0..16u64 {
            let c = |k: u64| t_series(if (idx >> k) & 1 == 1 { "1" } else { "0" }, &f2, 4);
            let c0 = c(0).add(&c(1).shift(1));
            let c1 = c(2).add(&c(3).shift(1));
            let x = TowerElem::from_coords(&t.ring, vec![c0.truncate(4), c1.truncate(4)]);
            let fixed = units.iter().all(|u| galois_act(u, &x, &t).unwrap() == x);
            assert_eq!(fixed, x.is_scalar(), "x = {x}");
        }
    }

    proptest! {
        #[test]
        fn formal_mult_is_additive_and_a_module_law(a in prop::collection::vec(0u64..3, 4), b in prop::collection::vec(0u64..3, 4)) {
            let f3 = FieldDesc::prime(3).unwrap();
            let unit = |v: &[u64]| {
                let terms = std::iter::once((0i64, FieldElem::one(&f3))).chain(v.iter().enumerate().map(|(i, x)| (i as i64 + 1, FieldElem::from_int(&f3, *x as i64))));
                FqSeries::from_terms(Var::T, terms, 10, FieldElem::zero(&f3))
            };
            let (u, v) = (unit(&a), unit(&b));
            let x_prec = 28;
            let mu = formal_mult(&u, x_prec);
            for (e, _) in mu.terms() {
                let mut k = e as u64;
                while k % 3 == 0 { k /= 3; }
                prop_assert_eq!(k, 1);
            }
            let comp = mu.compose(&formal_mult(&v, x_prec)).unwrap();
            prop_assert!(comp.agrees_with(&formal_mult(&u.mul(&v), x_prec)));
        }
    }
}
