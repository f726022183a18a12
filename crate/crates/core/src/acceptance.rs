//! The ten end-to-end acceptance checks, seeded and timed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aj::{aj_ratio, canonical_member, is_aj, reduces_to_one};
use crate::artin_hasse::{ah_compose, ah_decompose, dlog_identity_lhs, dlog_identity_rhs};
use crate::dmod::{decompose_one_form, dlog_of_unit, exterior_derivative, in_image_test, is_closed, phi1_pullback, OneFormQ, QElem};
use crate::gf::{Field, FieldDesc, FieldElem};
use crate::lubin_tate::{build_tower, galois_series_identity, units_mod, verify_fiber};
use crate::reciprocity::{as_pullback, dual_point_coords};
use crate::ring::Coeff;
use crate::series::{FqSeries, HatSeries, TruncSeries, Var, Window};
use crate::two_dim::{
    as_system_galois, fiber_check_2d, inflate, inverse_cartier_minus_one, kernel_test_and_project, primitive_indices,
    wp_q_normal_form, KElem, KernelCoords,
};

pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let limit = self.limit.map(|l| format!(" (limit {:.0?})", l)).unwrap_or_default();
        format!(
            "{status}: criterion {} {} [{:.3}s{limit}] {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

const CRITERIA: [(u8, &str, Check, Option<u64>); 10] = [
    (1, "artin-hasse dlog identity", c1_dlog_identity, Some(1)),
    (2, "artin-hasse round trip", c2_round_trip, Some(5)),
    (3, "alpha dlog of the dual point", c3_alpha_dlog, None),
    (4, "artin-schreier pullback factor", c4_as_factor, None),
    (5, "lubin-tate fiber identity", c5_lubin_tate, Some(10)),
    (6, "aj set", c6_aj, None),
    (7, "cartier kernel round trip", c7_kernel, None),
    (8, "wp_q normal form", c8_normal_form, None),
    (9, "two-dimensional galois rank", c9_galois, None),
    (10, "d-module decomposition", c10_dmod, Some(10)),
];

/// Run one criterion (1..=10) with a deterministic seed.
pub fn run_criterion(id: u8, seed: u64) -> Option<CriterionReport> {
    let &(id, name, check, limit) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(id as u64));
    let start = Instant::now();
    let outcome = check(&mut rng);
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let (pass, detail) = match outcome {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; exceeded the time limit")),
        Err(e) => (false, e),
    };
    Some(CriterionReport {
        id,
        name,
        pass,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, seed)).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(p: u64, n: usize) -> Result<Field, String> {
    FieldDesc::standard(p, n).map_err(|e| e.to_string())
}

fn random_elem(rng: &mut ChaCha8Rng, f: &Field) -> FieldElem {
    FieldElem::from_index(f, rng.gen_range(0..f.q()))
}

fn c1_dlog_identity(_: &mut ChaCha8Rng) -> Result<String, String> {
    for p in [2, 3, 5] {
        let lhs = dlog_identity_lhs(p, 64).map_err(|e| e.to_string())?;
        let rhs = dlog_identity_rhs(p, 64).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("p = {p}: identity fails"))?;
    }
    Ok("p in {2, 3, 5}, N = 64".into())
}

fn c2_round_trip(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 32;
    for (p, k) in [(2, 1), (2, 2), (3, 2)] {
        let f = field(p, k)?;
        for _ in 0..100 {
            let terms: Vec<(i64, FieldElem)> =
                std::iter::once((0, FieldElem::one(&f))).chain((1..n).map(|d| (d, random_elem(rng, &f)))).collect();
            let u = TruncSeries::from_terms(Var::That, terms, n, FieldElem::zero(&f));
            let coords = ah_decompose(&u, n).map_err(|e| e.to_string())?;
            let back = ah_compose(&coords, &f, n).map_err(|e| e.to_string())?;
            ensure(back == u, || format!("F_{}: round trip fails", f.q()))?;
        }
    }
    Ok("100 units each over F_2, F_4, F_9 at N = 32".into())
}

fn c3_alpha_dlog(_: &mut ChaCha8Rng) -> Result<String, String> {
    let n = 32;
    for p in [2, 3] {
        let f = field(p, 1)?;
        let coords = dual_point_coords(&f, n, n + 1).map_err(|e| e.to_string())?;
        for k in (1..n as u64).filter(|k| k % p != 0) {
            let c = coords.get(k).ok_or_else(|| format!("p = {p}: coordinate {k} missing"))?;
            let inv = FieldElem::from_int(&f, k as i64).inverse().ok_or("p divides n")?;
            let expected = FqSeries::monomial(Var::T, -(k as i64), inv, c.prec());
            ensure(c.prec() >= 1 && *c == expected, || {
                format!("p = {p}, n = {k}: got {}", crate::series::literal::format_series(c))
            })?;
        }
    }
    Ok("coordinates 1/(n T^n) for p not dividing n < 32, p in {2, 3}".into())
}

fn c4_as_factor(_: &mut ChaCha8Rng) -> Result<String, String> {
    let mut count = 0;
    for (p, k) in [(2, 1), (3, 1), (2, 2)] {
        let f = field(p, k)?;
        for n in (1..20u64).filter(|n| n % p != 0) {
            for a in FieldElem::all(&f).filter(|a| !a.is_zero()) {
                let d = as_pullback(&a, n).map_err(|e| e.to_string())?;
                let coeff = a.mul(&FieldElem::from_int(&f, n as i64).inverse().ok_or("p divides n")?);
                let exact = d.rhs.terms().map(|(e, c)| (e, c.clone())).collect::<Vec<_>>() == vec![(-(n as i64), coeff)];
                ensure(d.matches && exact, || format!("q = {}, n = {n}, a = {:?}: mismatch", f.q(), a.coeffs()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} pullbacks over q in {{2, 3, 4}}"))
}

fn c5_lubin_tate(_: &mut ChaCha8Rng) -> Result<String, String> {
    for (q, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let f = field(q, 1)?;
        let tower = build_tower(m, &f, 10).map_err(|e| e.to_string())?;
        ensure(verify_fiber(&tower, m).map_err(|e| e.to_string())?, || format!("(q, m) = ({q}, {m}): fiber identity fails"))?;
    }
    let mut units = 0;
    for m in [2, 3] {
        let f = field(2, 1)?;
        let tower = build_tower(m, &f, 10).map_err(|e| e.to_string())?;
        for u in units_mod(&f, m) {
            ensure(galois_series_identity(&u, &tower, m).map_err(|e| e.to_string())?, || {
                format!("m = {m}: galois identity fails for {}", crate::series::literal::format_series(&u))
            })?;
            units += 1;
        }
    }
    Ok(format!("5 fibers, {units} units"))
}

fn random_aj_unit(rng: &mut ChaCha8Rng, f: &Field, n: i64, m: i64) -> HatSeries {
    let zero = FqSeries::zero(Var::T, m, FieldElem::zero(f));
    let mut terms = vec![(0, FqSeries::constant(Var::T, FieldElem::one(f), m))];
    for k in 0..4 {
        let inner: Vec<(i64, FieldElem)> = (1..4).map(|a| (a, random_elem(rng, f))).collect();
        let c = FqSeries::from_terms(Var::T, inner, m, FieldElem::zero(f));
        terms.push((k, c));
    }
    let mut acc = TruncSeries::zero(Var::That, n, zero.clone());
    for (k, c) in terms {
        acc = acc.add(&TruncSeries::from_terms(Var::That, [(k, c)], n, zero.clone()));
    }
    acc
}

fn c6_aj(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let f = field(2, 2)?;
    let (n, m) = (12, 14);
    let base = canonical_member(&f, n, m);
    let v = is_aj(&base).map_err(|e| e.to_string())?;
    ensure(v.member, || format!("1 - T*That^-1 rejected: {:?}", v.reason))?;
    let mut members = Vec::new();
    for _ in 0..20 {
        let g = random_aj_unit(rng, &f, n, m).mul(&base);
        let v = is_aj(&g).map_err(|e| e.to_string())?;
        ensure(v.member, || format!("member rejected: {:?}", v.reason))?;
        ensure(g.valuation() == Ok(-1), || format!("valuation {:?}", g.valuation()))?;
        members.push(g);
    }
    for w in members.windows(3) {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let ab = aj_ratio(a, b).map_err(|e| e.to_string())?;
        let bc = aj_ratio(b, c).map_err(|e| e.to_string())?;
        let ac = aj_ratio(a, c).map_err(|e| e.to_string())?;
        ensure(reduces_to_one(&ab) && a.mul(&ab).agrees(b), || "ratio does not carry f to g".into())?;
        ensure(ab.mul(&bc).agrees(&ac), || "cocycle relation fails".into())?;
    }
    Ok("canonical member, 20 random members, 18 cocycle triples".into())
}

fn c7_kernel(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let window = (8, 8);
    for p in [2, 3] {
        let f = field(p, 1)?;
        for _ in 0..50 {
            let entries = primitive_indices(window, p).into_iter().map(|k| (k, random_elem(rng, &f))).collect();
            let omega = inflate(&KernelCoords { window, entries }, &f);
            let (member, proj) = kernel_test_and_project(&omega);
            ensure(member, || format!("p = {p}: kernel element rejected"))?;
            ensure(inflate(&proj, &f) == omega, || format!("p = {p}: round trip fails"))?;
            let img = inverse_cartier_minus_one(&omega).map_err(|e| e.to_string())?;
            ensure(img.is_zero(), || format!("p = {p}: C^-1 - 1 does not vanish"))?;
        }
    }
    Ok("50 elements each for p in {2, 3}, window (8, 8)".into())
}

fn c8_normal_form(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let w = Window::symmetric(6, 6);
    for (p, k) in [(2, 1), (2, 2)] {
        let f = field(p, k)?;
        let q = f.q();
        for _ in 0..100 {
            let count = rng.gen_range(1..16);
            let terms: Vec<((i64, i64), FieldElem)> =
                (0..count).map(|_| ((rng.gen_range(-6..=6), rng.gen_range(-6..=6)), random_elem(rng, &f))).collect();
            let g = KElem::from_terms(w, terms, FieldElem::zero(&f));
            let nf = wp_q_normal_form(&g, q);
            ensure(nf.verify(q), || format!("q = {q}: witness fails"))?;
            let again = wp_q_normal_form(&nf.result, q);
            ensure(again.result == nf.result && again.verify(q), || format!("q = {q}: not idempotent"))?;
        }
    }
    Ok("100 inputs each for q in {2, 4}, window (6, 6)".into())
}

fn c9_galois(_: &mut ChaCha8Rng) -> Result<String, String> {
    let mut windows = 0;
    for (p, k) in [(2, 1), (2, 2)] {
        let f = field(p, k)?;
        for i in 1..=4 {
            for j in 1..=4 {
                let r = as_system_galois((i, j), &f).map_err(|e| e.to_string())?;
                ensure(r.semilinear_rank == r.expected_rank, || {
                    format!("q = {}, window ({i}, {j}): rank {} != {}", f.q(), r.semilinear_rank, r.expected_rank)
                })?;
                ensure(r.group_order.is_some() && r.group_order == r.kernel_points, || {
                    format!("q = {}, window ({i}, {j}): q^r = {:?}, kernel count {:?}", f.q(), r.group_order, r.kernel_points)
                })?;
                ensure(fiber_check_2d(&r.system).map_err(|e| e.to_string())?, || {
                    format!("q = {}, window ({i}, {j}): fiber check fails", f.q())
                })?;
                windows += 1;
            }
        }
    }
    Ok(format!("{windows} windows up to (4, 4), q in {{2, 4}}"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=6)))
}

fn random_q_poly(rng: &mut ChaCha8Rng, lo: i64, hi: i64, count: usize) -> QElem {
    let mut f = QElem::zero(Window::new(0, 0, 0, 0), BigRational::from_integer(BigInt::from(0)));
    for _ in 0..count {
        let c = random_rational(rng);
        f.add_term((rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)), &c);
    }
    f
}

fn c10_dmod(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..100 {
        let h = random_q_poly(rng, -6, 6, 10);
        let omega = exterior_derivative(&h)
            .add(&OneFormQ::dlog_s(random_rational(rng)))
            .add(&OneFormQ::dlog_t(random_rational(rng)));
        ensure(is_closed(&omega), || "random form is not closed".into())?;
        let d = decompose_one_form(&omega).map_err(|e| e.to_string())?;
        ensure(d.reassemble() == omega, || "reassembly fails".into())?;

        let one = QElem::monomial(0, 0, BigRational::one());
        let u = random_q_poly(rng, 0, 3, 4).filter(|(a, b)| (a, b) != (0, 0)).add(&one);
        let shifted = omega.add(&dlog_of_unit(rng.gen_range(-3..=3), rng.gen_range(-3..=3), &u, 6, 6));
        let d2 = decompose_one_form(&shifted).map_err(|e| e.to_string())?;
        ensure((&d.a, &d.b, &d.h) == (&d2.a, &d2.b, &d2.h), || "class changes under a unit dlog".into())?;

        let coeffs: BTreeMap<(i64, i64), BigRational> =
            (0..rng.gen_range(1..8)).map(|_| ((rng.gen_range(1..=6), rng.gen_range(1..=6)), random_rational(rng))).collect();
        ensure(in_image_test(&phi1_pullback(&coeffs)).map_err(|e| e.to_string())?, || "pullback not in the image".into())?;
    }
    let half = OneFormQ::dlog_s(BigRational::new(BigInt::from(1), BigInt::from(2)));
    ensure(!in_image_test(&half).map_err(|e| e.to_string())?, || "(1/2) dlog S reported in the image".into())?;
    Ok("100 closed forms, window (6, 6)".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let a = run_criterion(8, 7).unwrap();
        let b = run_criterion(8, 7).unwrap();
        assert_eq!((a.pass, a.detail), (b.pass, b.detail));
        assert!(run_criterion(11, 7).is_none());
    }
}
