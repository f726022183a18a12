//! Two-dimensional local fields K = k((S))((T)) at window scale: 2-forms on
//! Ŝⁱ T̂ʲ dlog Ŝ ∧ dlog T̂, the operator C⁻¹ − 1 and its kernel, the dlog of
//! the symbol {−S+Ŝ, −T+T̂}, ℘_q normal forms with witnesses, and the
//! Artin–Schreier system x^q − x = S⁻ⁱT⁻ʲ.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf::{rank_fp, semilinear_rank, CoordVec, Field, FieldElem};
use crate::poly::{Monic, PolyQuotient};
use crate::ring::Coeff;
use crate::series::{BivarLaurent, SeriesError, TruncSeries, Var, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoDimError {
    #[error("index ({0}, {1}) is outside the window")]
    OutOfWindow(i64, i64),
    #[error("window ({0}, {1}) has no p-divisible grid points for p = {2}")]
    WindowTooSmall(i64, i64, u64),
    #[error("window ({0}, {1}) exceeds the supported size")]
    WindowTooLarge(i64, i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Σ a_{ij} Ŝⁱ T̂ʲ dlog Ŝ ∧ dlog T̂ over 1 ≤ i ≤ I, 1 ≤ j ≤ J.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm<R> {
    pub window: (i64, i64),
    coeffs: BTreeMap<(i64, i64), R>,
    zero: R,
}

impl<R: Coeff> TwoForm<R> {
    pub fn zero(window: (i64, i64), zero: R) -> Self {
        TwoForm {
            window,
            coeffs: BTreeMap::new(),
            zero,
        }
    }

    pub fn contains(&self, (i, j): (i64, i64)) -> bool {
        (1..=self.window.0).contains(&i) && (1..=self.window.1).contains(&j)
    }

    pub fn set(&mut self, i: i64, j: i64, c: R) -> Result<(), TwoDimError> {
        if !self.contains((i, j)) {
            return Err(TwoDimError::OutOfWindow(i, j));
        }
        if c.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
        Ok(())
    }

    pub fn get(&self, i: i64, j: i64) -> R {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn support(&self) -> impl Iterator<Item = ((i64, i64), &R)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = (i64, i64)> {
        let (ii, jj) = self.window;
        (1..=ii).flat_map(move |i| (1..=jj).map(move |j| (i, j)))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// p ∤ gcd(i, j).
pub fn is_primitive(i: i64, j: i64, p: u64) -> bool {
    gcd(i, j) % p as i64 != 0
}

/// Indices 1 ≤ i ≤ I, 1 ≤ j ≤ J with p ∤ gcd(i, j).
pub fn primitive_indices(window: (i64, i64), p: u64) -> Vec<(i64, i64)> {
    (1..=window.0)
        .flat_map(|i| (1..=window.1).map(move |j| (i, j)))
        .filter(|&(i, j)| is_primitive(i, j, p))
        .collect()
}

/// K-valued coefficients: finite Laurent polynomials in S, T over F_q.
pub type KElem = BivarLaurent<FieldElem>;

/// X̂ · dlog(−X + X̂) as a series in X̂ whose coefficients live in K; `s_axis`
/// picks X = S or X = T.
fn hat_dlog(field: &Field, prec: i64, s_axis: bool) -> Result<TruncSeries<KElem>, TwoDimError> {
    let var = if s_axis { Var::Shat } else { Var::That };
    let zero = KElem::zero(Window::new(0, 0, 0, 0), FieldElem::zero(field));
    let minus_x = if s_axis {
        KElem::monomial(1, 0, FieldElem::from_int(field, -1))
    } else {
        KElem::monomial(0, 1, FieldElem::from_int(field, -1))
    };
    let one = KElem::monomial(0, 0, FieldElem::one(field));
    let g = TruncSeries::from_terms(var, [(0, minus_x), (1, one)], prec, zero);
    Ok(g.dlog()?.shift(1))
}

/// The 2-form dlog(−S+Ŝ) ∧ dlog(−T+T̂) on the window, computed by series
/// expansion.
pub fn symbol_dlog(window: (i64, i64), field: &Field) -> Result<TwoForm<KElem>, TwoDimError> {
    let zero = KElem::zero(Window::new(0, 0, 0, 0), FieldElem::zero(field));
    let mut form = TwoForm::zero(window, zero);
    if window.0 < 1 || window.1 < 1 {
        return Ok(form);
    }
    let a = hat_dlog(field, window.0 + 1, true)?;
    let b = hat_dlog(field, window.1 + 1, false)?;
    for i in 1..=window.0 {
        for j in 1..=window.1 {
            form.set(i, j, a.coeff(i).mul(&b.coeff(j)))?;
        }
    }
    Ok(form)
}

/// S⁻ⁱT⁻ʲ.
pub fn symbol_coefficient(field: &Field, i: i64, j: i64) -> KElem {
    KElem::monomial(-i, -j, FieldElem::one(field))
}

/// The class of (C⁻¹ − 1)ω on the p-divisible grid: coefficient
/// a_{ij}^p − a_{pi,pj} at (pi, pj).
pub fn inverse_cartier_minus_one(omega: &TwoForm<FieldElem>) -> Result<TwoForm<FieldElem>, TwoDimError> {
    let p = omega.zero.field().p();
    let (ii, jj) = omega.window;
    let pi = p as i64;
    if ii < pi || jj < pi {
        return Err(TwoDimError::WindowTooSmall(ii, jj, p));
    }
    let mut out = TwoForm::zero(omega.window, omega.zero.clone());
    for i in 1..=ii / pi {
        for j in 1..=jj / pi {
            let c = omega.get(i, j).frobenius().sub(&omega.get(pi * i, pi * j));
            out.set(pi * i, pi * j, c)?;
        }
    }
    Ok(out)
}

/// Coefficients at p-primitive indices of a kernel element.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoords {
    pub window: (i64, i64),
    pub entries: BTreeMap<(i64, i64), FieldElem>,
}

/// Whether ω ∈ Ker(C⁻¹ − 1) within its window, and its primitive part.
pub fn kernel_test_and_project(omega: &TwoForm<FieldElem>) -> (bool, KernelCoords) {
    let p = omega.zero.field().p() as i64;
    let (ii, jj) = omega.window;
    let member = omega
        .indices()
        .filter(|&(i, j)| p * i <= ii && p * j <= jj)
        .all(|(i, j)| omega.get(i, j).frobenius() == omega.get(p * i, p * j));
    let entries = primitive_indices(omega.window, p as u64)
        .into_iter()
        .map(|(i, j)| ((i, j), omega.get(i, j)))
        .collect();
    (
        member,
        KernelCoords {
            window: omega.window,
            entries,
        },
    )
}

/// Rebuild a kernel element by a_{p^e i, p^e j} = a_{ij}^{p^e}.
pub fn inflate(coords: &KernelCoords, field: &Field) -> TwoForm<FieldElem> {
    let p = field.p() as i64;
    let (ii, jj) = coords.window;
    let mut out = TwoForm::zero(coords.window, FieldElem::zero(field));
    for (&(i, j), a) in &coords.entries {
        let (mut x, mut y, mut c) = (i, j, a.clone());
        while x <= ii && y <= jj {
            out.set(x, y, c.clone()).expect("inside window");
            x *= p;
            y *= p;
            c = c.frobenius();
        }
    }
    out
}

/// Outcome of reducing modulo ℘_q(K).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub result: KElem,
    /// x with x^q − x = input − result after clipping to the window.
    pub witness: KElem,
    pub discarded: KElem,
    pub window: Window,
}

impl NormalForm {
    /// Check x^q − x = discarded inside the window.
    pub fn verify(&self, q: u64) -> bool {
        let lhs = self.witness.pow_exact(q).sub(&self.witness).clip(self.window);
        lhs == self.discarded.clip(self.window)
    }
}

trait PowExact {
    fn pow_exact(&self, q: u64) -> Self;
}

impl PowExact for KElem {
    /// q-th power in characteristic p: a sum of monomials maps termwise.
    fn pow_exact(&self, q: u64) -> Self {
        let mut out = KElem::zero(self.window(), self.zero_coeff().clone());
        for ((a, b), c) in self.terms() {
            out.add_term((a * q as i64, b * q as i64), &c.pow(q));
        }
        out
    }
}

fn in_positive_region((a, b): (i64, i64)) -> bool {
    b >= 1 || (b == 0 && a >= 1)
}

/// Canonical representative of f modulo ℘_q(K), with a witness.
pub fn wp_q_normal_form(f: &KElem, q: u64) -> NormalForm {
    let window = f.window();
    let zero = f.zero_coeff().clone();
    let mut result = KElem::zero(window, zero.clone());
    let mut witness = KElem::zero(window, zero.clone());
    let qi = q as i64;
    for ((a, b), c) in f.terms() {
        if (a, b) == (0, 0) {
            result.add_term((0, 0), c);
        } else if in_positive_region((a, b)) {
            // g = −Σ_e g^{q^e} solves x^q − x = g; stop once the term leaves the window.
            let (mut x, mut y, mut cc) = (a, b, c.clone());
            while window.contains((x, y)) {
                witness.add_term((x, y), &cc.neg());
                x *= qi;
                y *= qi;
                cc = cc.pow(q);
            }
        } else {
            let (mut x, mut y, cc) = (a, b, c.clone());
            while x % qi == 0 && y % qi == 0 {
                x /= qi;
                y /= qi;
                witness.add_term((x, y), &cc);
            }
            result.add_term((x, y), &cc);
        }
    }
    let discarded = f.sub(&result);
    NormalForm {
        result: result.with_window(window),
        witness,
        discarded,
        window,
    }
}

/// Whether every monomial lies in one of the normal-form summands.
pub fn is_normal_support(f: &KElem, q: u64) -> bool {
    let qi = q as i64;
    f.support().all(|(a, b)| (a, b) == (0, 0) || (!in_positive_region((a, b)) && !(a % qi == 0 && b % qi == 0)))
}

/// The Artin–Schreier system attached to a window.
#[derive(Debug, Clone)]
pub struct AsSystem {
    pub field: Field,
    pub window: (i64, i64),
    /// (i, j, right-hand side), normally S⁻ⁱT⁻ʲ.
    pub generators: Vec<(i64, i64, KElem)>,
}

impl AsSystem {
    pub fn new(window: (i64, i64), field: &Field) -> Self {
        let generators = primitive_indices(window, field.p())
            .into_iter()
            .map(|(i, j)| (i, j, symbol_coefficient(field, i, j)))
            .collect();
        AsSystem {
            field: field.clone(),
            window,
            generators,
        }
    }

    /// Add `delta` to the right-hand side at (i, j).
    pub fn perturbed(&self, i: i64, j: i64, delta: &KElem) -> Self {
        let mut out = self.clone();
        for g in &mut out.generators {
            if (g.0, g.1) == (i, j) {
                g.2 = g.2.add(delta);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Summary of the Galois structure of an Artin–Schreier system.
#[derive(Debug, Clone)]
pub struct GaloisReport {
    pub system: AsSystem,
    /// r, the number of generators.
    pub generators: usize,
    /// F_q-rank of all Frobenius twists of the normal-form classes.
    pub semilinear_rank: usize,
    /// n·r.
    pub expected_rank: usize,
    /// log_q of the group order, i.e. r.
    pub order_exponent: usize,
    /// q^r, when it fits.
    pub group_order: Option<u128>,
    /// dim over F_p of the windowed Ker(C⁻¹ − 1)(k).
    pub kernel_dim_fp: usize,
    /// p^{kernel_dim_fp}, when it fits.
    pub kernel_points: Option<u128>,
}

impl GaloisReport {
    pub fn consistent(&self) -> bool {
        self.semilinear_rank == self.expected_rank
            && self.kernel_dim_fp == self.system.field.n() * self.order_exponent
    }
}

fn coords_of(f: &KElem) -> CoordVec<(i64, i64)> {
    f.terms().map(|(k, c)| (k, c.clone())).collect()
}

/// Normal-form coordinates of the p-power Frobenius of a class.
fn twist_class(v: &CoordVec<(i64, i64)>, field: &Field) -> CoordVec<(i64, i64)> {
    let p = field.p() as i64;
    let mut img = KElem::zero(Window::new(0, 0, 0, 0), FieldElem::zero(field));
    for (&(a, b), c) in v {
        img.add_term((a * p, b * p), &c.frobenius());
    }
    let w = img.window();
    coords_of(&wp_q_normal_form(&img.with_window(w), field.q()).result)
}

/// dim over F_p of {a ∈ k^{I×J} : a_{pi,pj} = a_{ij}^p whenever (pi,pj) is in the window}.
pub fn kernel_dimension_fp(window: (i64, i64), field: &Field) -> usize {
    let p = field.p();
    let n = field.n();
    let pi = p as i64;
    let idx: Vec<(i64, i64)> = (1..=window.0).flat_map(|i| (1..=window.1).map(move |j| (i, j))).collect();
    let pos: BTreeMap<(i64, i64), usize> = idx.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let cols = idx.len() * n;
    let constraints: Vec<(i64, i64)> = idx.iter().copied().filter(|&(i, j)| pi * i <= window.0 && pi * j <= window.1).collect();
    // Each constraint contributes n F_p-rows; build the matrix column by column.
    let mut rows = vec![vec![0u64; cols]; constraints.len() * n];
    for (ci, &(i, j)) in constraints.iter().enumerate() {
        for k in 0..n {
            let mut basis = vec![0u64; n];
            basis[k] = 1;
            let e = FieldElem::from_coeffs(field, &basis);
            let fro = e.frobenius();
            let col_src = pos[&(i, j)] * n + k;
            let col_dst = pos[&(pi * i, pi * j)] * n + k;
            for r in 0..n {
                rows[ci * n + r][col_src] = (rows[ci * n + r][col_src] + fro.coeffs()[r]) % p;
            }
            rows[ci * n + k][col_dst] = (rows[ci * n + k][col_dst] + p - 1) % p;
        }
    }
    cols - rank_fp(p, &rows)
}

/// The system {x^q − x = S⁻ⁱT⁻ʲ}, its semilinear rank and group order.
pub fn as_system_galois(window: (i64, i64), field: &Field) -> Result<GaloisReport, TwoDimError> {
    if window.0 > 8 || window.1 > 8 {
        return Err(TwoDimError::WindowTooLarge(window.0, window.1));
    }
    let system = AsSystem::new(window, field);
    let classes: Vec<CoordVec<(i64, i64)>> = system
        .generators
        .iter()
        .map(|(_, _, rhs)| coords_of(&wp_q_normal_form(rhs, field.q()).result))
        .collect();
    let rank = semilinear_rank(&classes, field, |v| twist_class(v, field));
    let r = system.rank();
    let kernel_dim_fp = kernel_dimension_fp(window, field);
    Ok(GaloisReport {
        generators: r,
        semilinear_rank: rank,
        expected_rank: field.n() * r,
        order_exponent: r,
        group_order: (field.q() as u128).checked_pow(r as u32),
        kernel_dim_fp,
        kernel_points: (field.p() as u128).checked_pow(kernel_dim_fp as u32),
        system,
    })
}

/// In K[x]/(x^q − x − rhs) for each generator, (F − 1)x equals the symbol
/// coefficient S⁻ⁱT⁻ʲ.
pub fn fiber_check_2d(system: &AsSystem) -> Result<bool, TwoDimError> {
    let field = &system.field;
    let q = field.q();
    let symbol = symbol_dlog(system.window, field)?;
    let zero = KElem::zero(Window::new(0, 0, 0, 0), FieldElem::zero(field));
    for (i, j, rhs) in &system.generators {
        let mut lower = vec![zero.clone(); q as usize];
        lower[0] = rhs.neg();
        lower[1] = lower[1].sub(&zero.one_like());
        let modulus = Monic::new(lower);
        let x = PolyQuotient::generator(&modulus);
        let lhs = x.pow(q).sub(&x);
        let expect = PolyQuotient::constant(&modulus, symbol.get(*i, *j));
        if lhs != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;
    use proptest::prelude::*;

    #[test]
    fn symbol_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let f = symbol_dlog((3, 3), &f2).unwrap();
        assert_eq!(f.get(1, 1), symbol_coefficient(&f2, 1, 1));
        assert_eq!(f.get(2, 3), symbol_coefficient(&f2, 2, 3));
        let f5 = FieldDesc::prime(5).unwrap();
        let f = symbol_dlog((4, 3), &f5).unwrap();
        for (i, j) in f.indices() {
            assert_eq!(f.get(i, j), symbol_coefficient(&f5, i, j));
        }
        assert!(symbol_dlog((0, 0), &f2).unwrap().is_zero());
    }

    #[test]
    fn cartier_examples() {
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let a = FieldElem::generator(&f4);
        let zero = TwoForm::zero((4, 4), FieldElem::zero(&f4));
        assert!(inverse_cartier_minus_one(&zero).unwrap().is_zero());
        let mut w = zero.clone();
        w.set(1, 1, a.clone()).unwrap();
        let c = inverse_cartier_minus_one(&w).unwrap();
        assert_eq!(c.support().collect::<Vec<_>>(), vec![((2, 2), &a.pow(2))]);
        w.set(2, 2, a.pow(2)).unwrap();
        assert_eq!(inverse_cartier_minus_one(&w).unwrap().get(2, 2), FieldElem::zero(&f4));
        let small = TwoForm::zero((1, 3), FieldElem::zero(&f4));
        assert_eq!(inverse_cartier_minus_one(&small), Err(TwoDimError::WindowTooSmall(1, 3, 2)));
    }

    #[test]
    fn kernel_examples() {
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let a = FieldElem::generator(&f4);
        let mut w = TwoForm::zero((4, 4), FieldElem::zero(&f4));
        w.set(1, 1, a.clone()).unwrap();
        w.set(2, 2, a.pow(2)).unwrap();
        w.set(4, 4, a.pow(4)).unwrap();
        let (ok, proj) = kernel_test_and_project(&w);
        assert!(ok);
        let nonzero: Vec<_> = proj.entries.iter().filter(|(_, c)| !c.is_zero()).collect();
        assert_eq!(nonzero, vec![(&(1, 1), &a)]);
        assert_eq!(inflate(&proj, &f4), w);
        let mut bad = TwoForm::zero((4, 4), FieldElem::zero(&f4));
        bad.set(2, 2, FieldElem::one(&f4)).unwrap();
        assert!(!kernel_test_and_project(&bad).0);
    }

    fn k(field: &Field, terms: &[(i64, i64, i64)], window: Window) -> KElem {
        KElem::from_terms(window, terms.iter().map(|&(a, b, c)| ((a, b), FieldElem::from_int(field, c))), FieldElem::zero(field))
    }

    #[test]
    fn normal_form_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let w = Window::symmetric(12, 12);
        let c = k(&f2, &[(0, 0, 1)], w);
        assert_eq!(wp_q_normal_form(&c, 2).result, c);
        let nf = wp_q_normal_form(&k(&f2, &[(-2, -2, 1)], w), 2);
        assert_eq!(nf.result, k(&f2, &[(-1, -1, 1)], w));
        assert!(nf.verify(2));
        let nf = wp_q_normal_form(&k(&f2, &[(0, 3, 1)], w), 2);
        assert!(nf.result.is_zero());
        assert_eq!(nf.witness, k(&f2, &[(0, 3, 1), (0, 6, 1), (0, 12, 1)], w));
        assert!(nf.verify(2));
    }

    #[test]
    fn galois_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let f4 = FieldDesc::standard(2, 2).unwrap();
        for field in [&f2, &f4, &FieldDesc::prime(3).unwrap()] {
            let g = as_system_galois((1, 1), field).unwrap();
            assert_eq!(g.generators, 1);
            assert_eq!(g.group_order, Some(field.q() as u128));
        }
        let g = as_system_galois((2, 2), &f2).unwrap();
        let gens: Vec<_> = g.system.generators.iter().map(|(i, j, _)| (*i, *j)).collect();
        assert_eq!(gens, vec![(1, 1), (1, 2), (2, 1)]);
        assert_eq!(g.semilinear_rank, 3);
        assert_eq!(g.group_order, Some(8));
        let g = as_system_galois((1, 1), &f4).unwrap();
        assert_eq!(g.semilinear_rank, 2);
        assert_eq!(g.group_order, Some(4));
        for (i, j) in [(2, 2), (3, 4), (4, 4)] {
            for field in [&f2, &f4] {
                let g = as_system_galois((i, j), field).unwrap();
                assert!(g.consistent(), "window ({i},{j}) q={}", field.q());
                assert_eq!(g.kernel_points, g.group_order);
            }
        }
    }

    #[test]
    fn fiber_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        assert!(fiber_check_2d(&AsSystem::new((1, 1), &f2)).unwrap());
        assert!(fiber_check_2d(&AsSystem::new((2, 2), &f2)).unwrap());
        let one = KElem::monomial(0, 0, FieldElem::one(&f2));
        assert!(!fiber_check_2d(&AsSystem::new((1, 1), &f2).perturbed(1, 1, &one)).unwrap());
    }

    /// Brute-force F_p count of the windowed kernel for tiny fields.
    fn brute_kernel_count(window: (i64, i64), field: &Field) -> u128 {
        let idx: Vec<(i64, i64)> = (1..=window.0).flat_map(|i| (1..=window.1).map(move |j| (i, j))).collect();
        let q = field.q();
        let total = q.pow(idx.len() as u32);
        let p = field.p() as i64;
        let mut count = 0;
        for mut code in 0..total {
            let mut w = TwoForm::zero(window, FieldElem::zero(field));
            for &(i, j) in &idx {
                w.set(i, j, FieldElem::from_index(field, code % q)).unwrap();
                code /= q;
            }
            let ok = w.indices().filter(|&(i, j)| p * i <= window.0 && p * j <= window.1).all(|(i, j)| w.get(i, j).frobenius() == w.get(p * i, p * j));
            count += ok as u128;
        }
        count
    }

    #[test]
    fn kernel_dimension_matches_brute_force() {
        let f2 = FieldDesc::prime(2).unwrap();
        let f4 = FieldDesc::standard(2, 2).unwrap();
        for (field, window) in [(&f2, (2, 2)), (&f2, (3, 3)), (&f2, (4, 2)), (&f4, (2, 2)), (&f4, (2, 3))] {
            let dim = kernel_dimension_fp(window, field);
            assert_eq!(2u128.pow(dim as u32), brute_kernel_count(window, field));
        }
    }

    proptest! {
        #[test]
        fn kernel_round_trip(seed in prop::collection::vec(0u64..9, 64), which in 0usize..2) {
            let field = [FieldDesc::standard(2, 2), FieldDesc::standard(3, 2)][which].clone().unwrap();
            let window = (8, 8);
            let entries = primitive_indices(window, field.p()).into_iter().zip(&seed).map(|(k, &x)| (k, FieldElem::from_index(&field, x % field.q()))).collect();
            let coords = KernelCoords { window, entries };
            let w = inflate(&coords, &field);
            prop_assert!(inverse_cartier_minus_one(&w).unwrap().is_zero());
            let (ok, proj) = kernel_test_and_project(&w);
            prop_assert!(ok);
            prop_assert_eq!(inflate(&proj, &field), w);
        }

        #[test]
        fn normal_form_idempotent_with_witness(terms in prop::collection::vec((-6i64..=6, -6i64..=6, 0u64..4), 0..12), which in 0usize..2) {
            let field = [FieldDesc::prime(2), FieldDesc::standard(2, 2)][which].clone().unwrap();
            let q = field.q();
            let w = Window::symmetric(6, 6);
            let f = KElem::from_terms(w, terms.iter().map(|&(a, b, c)| ((a, b), FieldElem::from_index(&field, c % q))), FieldElem::zero(&field));
            let nf = wp_q_normal_form(&f, q);
            prop_assert!(nf.verify(q));
            prop_assert!(is_normal_support(&nf.result, q));
            let again = wp_q_normal_form(&nf.result, q);
            prop_assert_eq!(&again.result, &nf.result);
            prop_assert!(again.witness.is_zero());
        }
    }
}
