//! Explicit pullback covers: Kummer covers yⁿ = −T for the prime-to-p part
//! and Artin–Schreier covers x^p − x = a/(n·Tⁿ) for the p-part, together
//! with a finite-level check that the character data of an AJ member do not
//! depend on the member chosen.

use std::sync::Arc;

use thiserror::Error;

use crate::aj::{self, AjError};
use crate::artin_hasse::{alpha_dlog, AhError, ModPCoords};
use crate::gf::{Field, FieldElem};
use crate::poly::{Monic, PolyQuotient};
use crate::ring::Coeff;
use crate::series::{FqSeries, HatSeries, TruncSeries, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipError {
    #[error("n = {n} is divisible by p = {p}")]
    DivisibleByP { n: u64, p: u64 },
    #[error("n must be positive")]
    ZeroN,
    #[error("mu_{n} is not contained in F_{q}")]
    RootsMissing { n: u64, q: u64 },
    #[error("trivial class: a = 0 gives the split extension")]
    TrivialClass,
    #[error(transparent)]
    Aj(#[from] AjError),
    #[error(transparent)]
    ArtinHasse(#[from] AhError),
}

/// Elements of K[y]/(yⁿ − base).
pub type KummerRing = PolyQuotient<FqSeries>;

#[derive(Debug, Clone)]
pub struct KummerDatum {
    pub n: u64,
    pub field: Field,
    pub base_point: FqSeries,
    pub modulus: Arc<Monic<FqSeries>>,
    /// ζ ↦ k with ζ = ζ₀^k for the chosen primitive root ζ₀.
    pub character_table: Vec<(FieldElem, u64)>,
    pub primitive_root: FieldElem,
    /// The n points ζ·y of the fiber.
    pub fiber: Vec<KummerRing>,
    pub eisenstein: bool,
    pub simply_transitive: bool,
    /// The character σ_ζ ↦ k has order n.
    pub character_order: u64,
}

fn check_n(n: u64, p: u64) -> Result<(), RecipError> {
    if n == 0 {
        return Err(RecipError::ZeroN);
    }
    if n % p == 0 {
        return Err(RecipError::DivisibleByP { n, p });
    }
    Ok(())
}

fn element_order(x: &FieldElem) -> u64 {
    let mut k = 1;
    let mut y = x.clone();
    while !y.is_one() {
        y = y.mul(x);
        k += 1;
    }
    k
}

fn primitive_element(field: &Field) -> FieldElem {
    FieldElem::all(field)
        .find(|x| !x.is_zero() && element_order(x) == field.q() - 1)
        .expect("the multiplicative group of a finite field is cyclic")
}

/// The cover yⁿ = −T over K known mod T^prec, with its μ_n-action.
pub fn kummer_pullback(n: u64, field: &Field, prec: i64) -> Result<KummerDatum, RecipError> {
    check_n(n, field.p())?;
    let q = field.q();
    if (q - 1) % n != 0 {
        return Err(RecipError::RootsMissing { n, q });
    }
    let zero = FieldElem::zero(field);
    let base_point = FqSeries::monomial(Var::T, 1, FieldElem::from_int(field, -1), prec);
    let inner_zero = FqSeries::zero(Var::T, prec, zero.clone());
    let mut lower = vec![inner_zero; n as usize];
    lower[0] = base_point.neg();
    let modulus = Monic::new(lower);
    let eisenstein = modulus.is_eisenstein(|c| c.valuation().ok());

    let zeta0 = primitive_element(field).pow((q - 1) / n);
    let character_table: Vec<(FieldElem, u64)> = (0..n).map(|k| (zeta0.pow(k), k)).collect();

    let y = KummerRing::generator(&modulus);
    let lift = |c: &FieldElem| KummerRing::constant(&modulus, FqSeries::constant(Var::T, c.clone(), prec));
    let fiber: Vec<KummerRing> = character_table.iter().map(|(z, _)| lift(z).mul(&y)).collect();

    let base = KummerRing::constant(&modulus, base_point.clone());
    let all_on_fiber = fiber.iter().all(|pt| pt.pow(n) == base);
    let distinct = (0..fiber.len()).all(|i| (0..i).all(|j| fiber[i] != fiber[j]));
    let acts = character_table.iter().all(|(z, k)| {
        fiber.iter().enumerate().all(|(i, pt)| {
            let moved = lift(z).mul(pt);
            moved == fiber[(i + *k as usize) % n as usize]
        })
    });
    let free = character_table
        .iter()
        .all(|(z, _)| z.is_one() || lift(z).mul(&y) != y);

    Ok(KummerDatum {
        n,
        field: field.clone(),
        base_point,
        modulus,
        primitive_root: zeta0.clone(),
        character_order: element_order(&zeta0),
        character_table,
        fiber,
        eisenstein,
        simply_transitive: all_on_fiber && distinct && acts && free,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsDatum {
    pub a: FieldElem,
    pub n: u64,
    /// a/(n·Tⁿ).
    pub rhs: FqSeries,
    /// a times the n-th coordinate of α∘dlog(1 − T⁻¹T̂).
    pub from_alpha_dlog: FqSeries,
    pub matches: bool,
}

/// 1 − T⁻¹·T̂ known mod T̂^n, coefficients mod T^m.
pub fn dual_point(field: &Field, n: i64, m: i64) -> HatSeries {
    let one = FqSeries::constant(Var::T, FieldElem::one(field), m);
    let c = FqSeries::monomial(Var::T, -1, FieldElem::from_int(field, -1), m);
    TruncSeries::from_terms(Var::That, [(0, one), (1, c)], n, FqSeries::zero(Var::T, m, FieldElem::zero(field)))
}

/// α∘dlog(1 − T⁻¹T̂) up to index < n, with coefficients carried mod T^m.
pub fn dual_point_coords(field: &Field, n: i64, m: i64) -> Result<ModPCoords<FqSeries>, RecipError> {
    Ok(alpha_dlog(&dual_point(field, n, m), field.p(), n)?)
}

/// The pullback of a⁻¹℘ along the coordinate n: x^p − x = a/(n·Tⁿ).
pub fn as_pullback(a: &FieldElem, n: u64) -> Result<AsDatum, RecipError> {
    let field = a.field().clone();
    check_n(n, field.p())?;
    if a.is_zero() {
        return Err(RecipError::TrivialClass);
    }
    let ni = n as i64;
    let m = ni + 2;
    let inv_n = FieldElem::from_int(&field, ni).inverse().expect("p does not divide n");
    let coords = dual_point_coords(&field, ni + 1, m)?;
    let from_alpha_dlog = coords
        .get(n)
        .cloned()
        .unwrap_or_else(|| FqSeries::zero(Var::T, -ni, FieldElem::zero(&field)))
        .scale(a);
    let rhs = FqSeries::monomial(Var::T, -ni, a.mul(&inv_n), from_alpha_dlog.prec().max(1 - ni));
    let matches = from_alpha_dlog.prec() > -ni && rhs.agrees(&from_alpha_dlog);
    Ok(AsDatum {
        a: a.clone(),
        n,
        rhs,
        from_alpha_dlog,
        matches,
    })
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub holds: bool,
    pub ratio: HatSeries,
    pub coords_first: ModPCoords<FqSeries>,
    pub coords_second: ModPCoords<FqSeries>,
    pub coords_ratio: ModPCoords<FqSeries>,
}

fn normalized(u: &HatSeries) -> Result<HatSeries, RecipError> {
    let c0 = u.coeff(0);
    let inv = c0.invert().map_err(AjError::from)?;
    Ok(u.map_coeffs(|c| c.mul(&inv)))
}

/// The α∘dlog data of the unit parts of f1 and f2 differ exactly by the
/// data of their ratio, and that difference lies in 𝔭_K.
pub fn eta_invariance_check(f1: &HatSeries, f2: &HatSeries, n: i64) -> Result<InvarianceReport, RecipError> {
    let field = f1.zero_coeff().zero_coeff().field().clone();
    let p = field.p();
    let ratio = aj::aj_ratio(f1, f2)?;
    let m = crate::series::literal::min_inner_prec(f1).min(crate::series::literal::min_inner_prec(f2));
    let t = FqSeries::uniformizer(&field, m);
    let (u1, _) = aj::split_coords(f1, &t)?;
    let (u2, _) = aj::split_coords(f2, &t)?;
    let c1 = alpha_dlog(&normalized(&u1)?, p, n)?;
    let c2 = alpha_dlog(&normalized(&u2)?, p, n)?;
    let cr = alpha_dlog(&normalized(&ratio)?, p, n)?;
    if let Some((k, _)) = c1.entries.iter().chain(&c2.entries).find(|(_, c)| c.prec() <= 0) {
        return Err(AjError::Undecidable(format!("coordinate {k} has no positive T-precision")).into());
    }
    let differ_by_ratio = cr.entries.iter().all(|(k, c)| match (c1.get(*k), c2.get(*k)) {
        (Some(a), Some(b)) => b.sub(a).agrees(c),
        _ => true,
    });
    let integral = cr.entries.values().all(|c| c.is_zero() || c.lo() >= 1);
    Ok(InvarianceReport {
        holds: aj::reduces_to_one(&ratio) && differ_by_ratio && integral,
        ratio,
        coords_first: c1,
        coords_second: c2,
        coords_ratio: cr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aj::canonical_member;
    use crate::gf::FieldDesc;
    use crate::series::literal::hat_series;

    #[test]
    fn kummer_examples() {
        let f4 = FieldDesc::standard(2, 2).unwrap();
        let d = kummer_pullback(3, &f4, 8).unwrap();
        assert!(d.eisenstein && d.simply_transitive);
        assert_eq!(d.character_order, 3);
        assert_eq!(d.fiber.len(), 3);
        // Root multiplication oracle: ζ³ = 1 for exactly three ζ in F_4.
        let roots: Vec<_> = FieldElem::all(&f4).filter(|z| z.pow(3).is_one()).collect();
        assert_eq!(roots.len(), 3);
        for (z, _) in &d.character_table {
            assert!(roots.contains(z));
        }
        let d1 = kummer_pullback(1, &f4, 8).unwrap();
        assert_eq!(d1.fiber.len(), 1);
        assert_eq!(d1.fiber[0].coeff(0), d1.base_point);
        assert!(matches!(kummer_pullback(2, &f4, 8), Err(RecipError::DivisibleByP { .. })));
        assert!(matches!(kummer_pullback(5, &f4, 8), Err(RecipError::RootsMissing { .. })));
        let f7 = FieldDesc::prime(7).unwrap();
        for n in [1, 2, 3, 6] {
            let d = kummer_pullback(n, &f7, 6).unwrap();
            assert!(d.simply_transitive && d.eisenstein && d.character_order == n);
        }
    }

    #[test]
    fn as_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let d = as_pullback(&FieldElem::one(&f2), 1).unwrap();
        assert!(d.matches);
        assert_eq!(d.rhs.terms().collect::<Vec<_>>(), vec![(-1, &FieldElem::one(&f2))]);
        let f3 = FieldDesc::prime(3).unwrap();
        let d = as_pullback(&FieldElem::one(&f3), 2).unwrap();
        assert!(d.matches);
        assert_eq!(d.rhs.coeff(-2), FieldElem::from_int(&f3, 2));
        assert_eq!(as_pullback(&FieldElem::zero(&f3), 2).unwrap_err(), RecipError::TrivialClass);
        assert!(matches!(as_pullback(&FieldElem::one(&f3), 3), Err(RecipError::DivisibleByP { .. })));
    }

    #[test]
    fn multiplication_by_inverse_n() {
        for field in [FieldDesc::prime(2), FieldDesc::prime(3), FieldDesc::standard(2, 2)] {
            let field = field.unwrap();
            for a in FieldElem::all(&field).filter(|a| !a.is_zero()) {
                for n in (1..20u64).filter(|n| n % field.p() != 0) {
                    let d = as_pullback(&a, n).unwrap();
                    assert!(d.matches, "q={} n={n}", field.q());
                }
            }
        }
    }

    #[test]
    fn invariance_examples() {
        let f2 = FieldDesc::prime(2).unwrap();
        let f = canonical_member(&f2, 10, 14);
        assert!(eta_invariance_check(&f, &f, 10).unwrap().holds);
        let u = hat_series("1 + T*That", &f2, Some(10), Some(14)).unwrap();
        assert!(eta_invariance_check(&f, &u.mul(&f), 10).unwrap().holds);
        let f3 = FieldDesc::prime(3).unwrap();
        let f = canonical_member(&f3, 10, 14);
        let u = hat_series("1 + T^2*That + 2*T*That^3 + T", &f3, Some(10), Some(14)).unwrap();
        let r = eta_invariance_check(&f, &u.mul(&f), 10).unwrap();
        assert!(r.holds);
        let pi = FqSeries::from_terms(Var::T, [(1, FieldElem::one(&f3)), (2, FieldElem::one(&f3))], 14, FieldElem::zero(&f3));
        let g = crate::aj::member_for_prime(&pi, 10, 14).unwrap();
        assert!(eta_invariance_check(&f, &g, 10).unwrap().holds);
        assert!(eta_invariance_check(&f, &hat_series("1", &f3, Some(10), Some(14)).unwrap(), 10).is_err());
    }
}
