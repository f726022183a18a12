use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use lcft_core::acceptance::run_all;
use lcft_core::aj::{aj_ratio, is_aj, reduces_to_one, split_coords};
use lcft_core::artin_hasse::{ah_compose, ah_decompose, alpha_dlog, artin_hasse_F, artin_hasse_rational, WittCoords};
use lcft_core::dmod::{decompose_one_form, exterior_derivative, in_image_test, is_closed, phi1_pullback, OneFormQ, QElem};
use lcft_core::gf::{is_prime, Field, FieldDesc, FieldElem};
use lcft_core::lubin_tate::{build_tower, galois_images, galois_series_identity, units_mod, verify_fiber, LtTower};
use lcft_core::reciprocity::{as_pullback, eta_invariance_check, kummer_pullback};
use lcft_core::ring::Coeff;
use lcft_core::series::literal::{
    bivar, coeff_to_field, coeff_to_rational, format_bivar, format_nested, format_series, fq_series, hat_series,
    parse_literal,
};
use lcft_core::series::{HatSeries, Var, Window};
use lcft_core::two_dim::{
    as_system_galois, fiber_check_2d, inverse_cartier_minus_one, kernel_test_and_project, symbol_coefficient,
    symbol_dlog, wp_q_normal_form, AsSystem, KElem, TwoForm,
};

use crate::report::{failed, parse_err, CliError, Report};
use crate::{AhOp, AjOp, Cli, Command, Config, DmodOp, LtArgs, LtOp, RecipOp, TwoDimOp, WindowArgs};

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.config;
    if c.prec < 2 {
        return Err(CliError::Parse(format!("precision must be at least 2, got {}", c.prec)));
    }
    match &cli.command {
        Command::Aj { op } => aj(op, c),
        Command::Ah { op } => ah(op, c),
        Command::Recip { op } => recip(op, c),
        Command::Lt { op } => lt(op, c),
        Command::Twodim { op } => twodim(op),
        Command::Dmod { op } => dmod(op),
        Command::Verify => verify(c),
    }
}

fn config_field(c: &Config) -> Result<Field, CliError> {
    FieldDesc::parse(&c.field).map_err(parse_err)
}

/// F_q for a prime power q, with the default modulus.
fn field_of_order(q: u64) -> Result<Field, CliError> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| parse_err(format!("q = {q} is not a prime power")))?;
    let (mut r, mut n) = (q, 0);
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    if r != 1 || !is_prime(p) {
        return Err(parse_err(format!("q = {q} is not a prime power")));
    }
    FieldDesc::standard(p, n).map_err(parse_err)
}

fn hat(src: &str, field: &Field, prec: i64) -> Result<HatSeries, CliError> {
    hat_series(src, field, Some(prec), Some(prec)).map_err(parse_err)
}

fn field_elem(src: &str, field: &Field) -> Result<FieldElem, CliError> {
    let lit = parse_literal(src).map_err(parse_err)?;
    match lit.terms.as_slice() {
        [] => Ok(FieldElem::zero(field)),
        [t] if t.powers.iter().all(|(_, e)| *e == 0) => coeff_to_field(&t.coeff, field).map_err(parse_err),
        _ => Err(parse_err(format!("{src:?} is not a field element"))),
    }
}

fn kelem(src: &str, field: &Field) -> Result<KElem, CliError> {
    bivar(src, FieldElem::zero(field), |c| coeff_to_field(c, field)).map_err(parse_err)
}

fn qelem(src: &str) -> Result<QElem, CliError> {
    bivar(src, BigRational::from_integer(0.into()), coeff_to_rational).map_err(parse_err)
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn aj(op: &AjOp, c: &Config) -> Result<Report, CliError> {
    let field = config_field(c)?;
    match op {
        AjOp::Check { f } => {
            let x = hat(f, &field, c.prec)?;
            let mut r = Report::new("aj check", json!({ "f": f, "field": c.field }));
            let v = is_aj(&x).map_err(failed)?;
            r.result = json!({ "member": v.member, "reason": v.reason });
            if let Some(q) = &v.quotient {
                r.certificate("quotient", s(format_nested(q)));
                r.line(format!("quotient f/(1 - T*That^-1) = {}", format_nested(q)));
            }
            match &v.reason {
                None => r.check(true, "f is in the AJ set"),
                Some(reason) => r.check(false, reason),
            };
            Ok(r)
        }
        AjOp::Ratio { f, g } => {
            let (x, y) = (hat(f, &field, c.prec)?, hat(g, &field, c.prec)?);
            let mut r = Report::new("aj ratio", json!({ "f": f, "g": g, "field": c.field }));
            let u = aj_ratio(&x, &y).map_err(failed)?;
            r.result = s(format_nested(&u));
            r.line(format_nested(&u));
            let one = reduces_to_one(&u);
            let carries = x.mul(&u).agrees(&y);
            r.certificate("reduces_to_one", json!(one)).certificate("f_times_ratio_is_g", json!(carries));
            r.check(one, "ratio reduces to 1 mod p_K").check(carries, "f * ratio = g");
            Ok(r)
        }
        AjOp::Split { f, prime } => {
            let x = hat(f, &field, c.prec)?;
            let pi = fq_series(prime, Var::T, &field, Some(c.prec)).map_err(parse_err)?;
            let mut r = Report::new("aj split", json!({ "f": f, "prime": prime, "field": c.field }));
            let (unit, val) = split_coords(&x, &pi).map_err(failed)?;
            r.result = json!({ "unit": format_nested(&unit), "valuation": val });
            r.line(format!("unit = {}", format_nested(&unit))).line(format!("valuation = {val}"));
            Ok(r)
        }
    }
}

fn witt_text(c: &WittCoords) -> Vec<String> {
    c.entries.iter().map(|((n, m), a)| format!("{n},{m},{a}")).collect()
}

fn parse_coord(src: &str, field: &Field) -> Result<((u64, u32), FieldElem), CliError> {
    let mut parts = src.splitn(3, ',');
    let bad = || parse_err(format!("coordinate {src:?} is not n,m,coeff"));
    let n = parts.next().and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
    let m = parts.next().and_then(|x| x.trim().parse().ok()).ok_or_else(bad)?;
    let a = field_elem(parts.next().ok_or_else(bad)?, field)?;
    if n % field.p() == 0 {
        return Err(parse_err(format!("n = {n} is divisible by p")));
    }
    Ok(((n, m), a))
}

fn ah(op: &AhOp, c: &Config) -> Result<Report, CliError> {
    match op {
        AhOp::F { p } => {
            let f = artin_hasse_F(*p, c.prec).map_err(failed)?;
            let rational = artin_hasse_rational(*p, c.prec as usize).map_err(failed)?;
            let mut r = Report::new("ah F", json!({ "p": p, "prec": c.prec }));
            r.result = s(format_series(&f));
            r.certificate("rational_coefficients", json!(rational.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
            r.line(format_series(&f));
            Ok(r)
        }
        AhOp::Compose { coords } => {
            let field = config_field(c)?;
            let entries = coords.iter().map(|x| parse_coord(x, &field)).collect::<Result<BTreeMap<_, _>, _>>()?;
            let w = WittCoords {
                p: field.p(),
                prec: c.prec,
                entries,
            };
            let u = ah_compose(&w, &field, c.prec).map_err(failed)?;
            let mut r = Report::new("ah compose", json!({ "coords": coords, "field": c.field, "prec": c.prec }));
            r.result = s(format_series(&u));
            r.line(format_series(&u));
            Ok(r)
        }
        AhOp::Decompose { u } => {
            let field = config_field(c)?;
            let x = fq_series(u, Var::That, &field, Some(c.prec)).map_err(parse_err)?;
            let w = ah_decompose(&x, x.prec()).map_err(failed)?;
            let back = ah_compose(&w, &field, w.prec).map_err(failed)?;
            let mut r = Report::new("ah decompose", json!({ "u": u, "field": c.field }));
            let text = witt_text(&w);
            r.result = json!(text);
            r.certificate("recomposed", s(format_series(&back)));
            for t in &text {
                r.line(format!("--coord {t}"));
            }
            r.check(back.agrees(&x), "ah_compose(coords) = u");
            Ok(r)
        }
        AhOp::Alphadlog { u } => {
            let field = config_field(c)?;
            let x = hat(u, &field, c.prec)?;
            let coords = alpha_dlog(&x, field.p(), x.prec()).map_err(failed)?;
            let mut r = Report::new("ah alphadlog", json!({ "u": u, "field": c.field }));
            let mut out = serde_json::Map::new();
            for (n, v) in &coords.entries {
                out.insert(n.to_string(), s(format_series(v)));
                r.line(format!("{n}: {}", format_series(v)));
            }
            r.result = Value::Object(out);
            Ok(r)
        }
    }
}

fn recip(op: &RecipOp, c: &Config) -> Result<Report, CliError> {
    let field = config_field(c)?;
    match op {
        RecipOp::Kummer { n } => {
            let d = kummer_pullback(*n, &field, c.prec).map_err(failed)?;
            let mut r = Report::new("recip kummer", json!({ "n": n, "field": c.field, "prec": c.prec }));
            let table: Vec<Value> = d.character_table.iter().map(|(z, k)| json!({ "zeta": z.to_string(), "k": k })).collect();
            r.result = json!({ "primitive_root": d.primitive_root.to_string(), "character_order": d.character_order, "character_table": table });
            r.certificate("eisenstein", json!(d.eisenstein)).certificate("simply_transitive", json!(d.simply_transitive));
            r.line(format!("cover y^{n} = {}", format_series(&d.base_point)));
            for (z, k) in &d.character_table {
                r.line(format!("sigma_{z}: y -> {z}*y, character value {k}"));
            }
            r.check(d.eisenstein, "y^n + T is Eisenstein")
                .check(d.simply_transitive, "mu_n acts simply transitively on the fiber")
                .check(d.character_order == *n, "the Kummer character has order n");
            Ok(r)
        }
        RecipOp::As { a, n } => {
            let a = field_elem(a, &field)?;
            let d = as_pullback(&a, *n).map_err(failed)?;
            let mut r = Report::new("recip as", json!({ "a": a.to_string(), "n": n, "field": c.field }));
            r.result = s(format_series(&d.rhs));
            r.certificate("from_alpha_dlog", s(format_series(&d.from_alpha_dlog)));
            r.line(format!("x^p - x = {}", format_series(&d.rhs)));
            r.check(d.matches, "rhs = a * (coordinate n of alpha dlog(1 - T^-1*That))");
            Ok(r)
        }
        RecipOp::Invariance { f1, f2, n } => {
            let (x, y) = (hat(f1, &field, c.prec)?, hat(f2, &field, c.prec)?);
            let rep = eta_invariance_check(&x, &y, *n).map_err(failed)?;
            let mut r = Report::new("recip invariance", json!({ "f1": f1, "f2": f2, "n": n, "field": c.field }));
            r.result = json!(rep.holds);
            r.certificate("ratio", s(format_nested(&rep.ratio)));
            let coords: BTreeMap<String, String> =
                rep.coords_ratio.entries.iter().map(|(k, v)| (k.to_string(), format_series(v))).collect();
            r.certificate("ratio_coordinates", json!(coords));
            r.line(format!("ratio = {}", format_nested(&rep.ratio)));
            r.check(rep.holds, "character data agree for f1 and f2");
            Ok(r)
        }
    }
}

fn tower(args: &LtArgs, c: &Config) -> Result<(Field, LtTower), CliError> {
    let field = field_of_order(args.q)?;
    let t = build_tower(args.m, &field, c.prec).map_err(failed)?;
    Ok((field, t))
}

fn lt(op: &LtOp, c: &Config) -> Result<Report, CliError> {
    match op {
        LtOp::Build { args } => {
            let (_, t) = tower(args, c)?;
            let mut r = Report::new("lt build", json!({ "q": args.q, "m": args.m, "prec": c.prec }));
            let alphas: Vec<String> = t.alphas.iter().map(|a| a.to_string()).collect();
            r.result = json!({ "alphas": alphas, "degree": t.ring.dim() });
            r.certificate("eisenstein", json!(t.eisenstein)).certificate("torsion_certified", json!(t.torsion_certified));
            for (j, a) in alphas.iter().enumerate() {
                r.line(format!("alpha_{} = {a}", j + 1));
            }
            r.line(format!("[L_m : K] = {}", t.ring.dim()));
            r.check(t.eisenstein, "X^(q-1) + T is Eisenstein")
                .check(t.torsion_certified, "f^(j-1)(alpha_j) != 0 and f^j(alpha_j) = 0");
            Ok(r)
        }
        LtOp::Fiber { args } => {
            let (_, t) = tower(args, c)?;
            let ok = verify_fiber(&t, args.m).map_err(failed)?;
            let mut r = Report::new("lt fiber", json!({ "q": args.q, "m": args.m, "prec": c.prec }));
            r.result = json!(ok);
            r.check(ok, "F(g) = (−T+That)·g");
            Ok(r)
        }
        LtOp::Galois { args, u } => {
            let (field, t) = tower(args, c)?;
            let unit = fq_series(u, Var::T, &field, Some(c.prec)).map_err(parse_err)?;
            let images = galois_images(&unit, &t).map_err(failed)?;
            let ok = galois_series_identity(&unit, &t, args.m).map_err(failed)?;
            let mut r = Report::new("lt galois", json!({ "q": args.q, "m": args.m, "u": u }));
            let text: Vec<String> = images.iter().map(|x| x.to_string()).collect();
            r.result = json!(text);
            for (j, x) in text.iter().enumerate() {
                r.line(format!("sigma_u(alpha_{}) = {x}", j + 1));
            }
            r.certificate("series_identity", json!(ok));
            r.check(ok, "sum sigma_u(alpha_(j+1)) That^j = u(That) g");
            Ok(r)
        }
        LtOp::Identity { args, u } => {
            let (field, t) = tower(args, c)?;
            let units = match u {
                Some(u) => vec![fq_series(u, Var::T, &field, Some(args.m as i64)).map_err(parse_err)?],
                None => units_mod(&field, args.m),
            };
            let mut r = Report::new("lt identity", json!({ "q": args.q, "m": args.m, "u": u }));
            let mut results = serde_json::Map::new();
            for unit in &units {
                let ok = galois_series_identity(unit, &t, args.m).map_err(failed)?;
                let name = format_series(unit);
                results.insert(name.clone(), json!(ok));
                r.check(ok, &format!("identity for u = {name}"));
            }
            r.result = Value::Object(results);
            Ok(r)
        }
    }
}

fn two_form(src: &str, args: &WindowArgs, field: &Field) -> Result<TwoForm<FieldElem>, CliError> {
    let k = kelem(src, field)?;
    let mut w = TwoForm::zero(args.window, FieldElem::zero(field));
    for ((i, j), a) in k.terms() {
        w.set(i, j, a.clone()).map_err(parse_err)?;
    }
    Ok(w)
}

fn form_literal(w: &TwoForm<FieldElem>, field: &Field) -> String {
    let terms = w.support().map(|(k, c)| (k, c.clone()));
    let (i, j) = w.window;
    format_bivar(&KElem::from_terms(Window::new(1, i, 1, j), terms, FieldElem::zero(field)))
}

fn twodim(op: &TwoDimOp) -> Result<Report, CliError> {
    let args = match op {
        TwoDimOp::Symbol { args }
        | TwoDimOp::Cartier { args, .. }
        | TwoDimOp::Kernel { args, .. }
        | TwoDimOp::Normalform { args, .. }
        | TwoDimOp::Galois { args }
        | TwoDimOp::Fiber { args } => args,
    };
    let field = field_of_order(args.q)?;
    let (wi, wj) = args.window;
    let inputs = |extra: Value| {
        let mut v = json!({ "window": [wi, wj], "q": args.q });
        if let Value::Object(m) = extra {
            for (k, x) in m {
                v[k] = x;
            }
        }
        v
    };
    match op {
        TwoDimOp::Symbol { .. } => {
            let form = symbol_dlog(args.window, &field).map_err(failed)?;
            let mut r = Report::new("twodim symbol", inputs(json!({})));
            let mut out = serde_json::Map::new();
            let mut ok = true;
            for ((i, j), c) in form.support() {
                ok &= *c == symbol_coefficient(&field, i, j);
                out.insert(format!("{i},{j}"), s(format_bivar(c)));
                r.line(format!("({i}, {j}): {}", format_bivar(c)));
            }
            ok &= form.support().count() == (wi.max(0) * wj.max(0)) as usize;
            r.result = Value::Object(out);
            r.check(ok, "coefficient of Shat^i That^j is S^-i T^-j");
            Ok(r)
        }
        TwoDimOp::Cartier { form, .. } => {
            let w = two_form(form, args, &field)?;
            let img = inverse_cartier_minus_one(&w).map_err(failed)?;
            let mut r = Report::new("twodim cartier", inputs(json!({ "form": form })));
            r.result = s(form_literal(&img, &field));
            r.line(form_literal(&img, &field));
            Ok(r)
        }
        TwoDimOp::Kernel { form, .. } => {
            let w = two_form(form, args, &field)?;
            let (member, proj) = kernel_test_and_project(&w);
            let mut r = Report::new("twodim kernel", inputs(json!({ "form": form })));
            let prim = KElem::from_terms(Window::new(1, wi, 1, wj), proj.entries.clone(), FieldElem::zero(&field));
            r.result = json!({ "member": member, "primitive_part": format_bivar(&prim) });
            r.line(format!("primitive part: {}", format_bivar(&prim)));
            r.check(member, "form lies in Ker(C^-1 - 1)");
            Ok(r)
        }
        TwoDimOp::Normalform { f, .. } => {
            let w = Window::symmetric(wi, wj);
            let x = kelem(f, &field)?.with_window(w);
            let nf = wp_q_normal_form(&x, field.q());
            let ok = nf.verify(field.q());
            let mut r = Report::new("twodim normalform", inputs(json!({ "f": f })));
            r.result = s(format_bivar(&nf.result));
            r.certificate("witness", s(format_bivar(&nf.witness)))
                .certificate("discarded", s(format_bivar(&nf.discarded)));
            r.line(format_bivar(&nf.result))
                .line(format!("witness x = {}", format_bivar(&nf.witness)))
                .line(format!("discarded = {}", format_bivar(&nf.discarded)));
            r.check(ok, "x^q - x = discarded inside the window");
            Ok(r)
        }
        TwoDimOp::Galois { .. } => {
            let g = as_system_galois(args.window, &field).map_err(failed)?;
            let mut r = Report::new("twodim galois", inputs(json!({})));
            r.result = json!({
                "generators": g.generators,
                "semilinear_rank": g.semilinear_rank,
                "expected_rank": g.expected_rank,
                "group_order": g.group_order.map(|x| x.to_string()),
                "kernel_points": g.kernel_points.map(|x| x.to_string()),
            });
            r.line(format!("r = {}, rank = {} (n*r = {})", g.generators, g.semilinear_rank, g.expected_rank));
            let show = |x: Option<u128>| x.map_or_else(|| "overflow".to_string(), |v| v.to_string());
            r.line(format!("q^r = {}, |Ker(C^-1 - 1)(k)| = {}", show(g.group_order), show(g.kernel_points)));
            r.check(g.consistent(), "rank = n*r and q^r = kernel count");
            Ok(r)
        }
        TwoDimOp::Fiber { .. } => {
            let ok = fiber_check_2d(&AsSystem::new(args.window, &field)).map_err(failed)?;
            let mut r = Report::new("twodim fiber", inputs(json!({})));
            r.result = json!(ok);
            r.check(ok, "(F - 1)x = S^-i T^-j for every generator");
            Ok(r)
        }
    }
}

fn one_form_text(w: &OneFormQ) -> (String, String) {
    let (p, q) = w.dlog_coeffs();
    (format_bivar(&p), format_bivar(&q))
}

fn one_form(p: &str, q: &str) -> Result<OneFormQ, CliError> {
    Ok(OneFormQ::from_dlog(&qelem(p)?, &qelem(q)?))
}

fn dmod(op: &DmodOp) -> Result<Report, CliError> {
    match op {
        DmodOp::D { f } => {
            let w = exterior_derivative(&qelem(f)?);
            let (p, q) = one_form_text(&w);
            let mut r = Report::new("dmod d", json!({ "f": f }));
            r.result = json!({ "dlogS": p, "dlogT": q });
            r.line(format!("dlogS: {p}")).line(format!("dlogT: {q}"));
            Ok(r)
        }
        DmodOp::Closed { p, q } => {
            let ok = is_closed(&one_form(p, q)?);
            let mut r = Report::new("dmod closed", json!({ "dlogS": p, "dlogT": q }));
            r.result = json!(ok);
            r.check(ok, "the form is closed");
            Ok(r)
        }
        DmodOp::Decompose { p, q } => {
            let w = one_form(p, q)?;
            let d = decompose_one_form(&w).map_err(failed)?;
            let mut r = Report::new("dmod decompose", json!({ "dlogS": p, "dlogT": q }));
            r.result = json!({
                "a": d.a.to_string(),
                "b": d.b.to_string(),
                "h": format_bivar(&d.h),
            });
            r.certificate("a_int", s(&d.a_int))
                .certificate("b_int", s(&d.b_int))
                .certificate("absorbed", s(format_bivar(&d.absorbed)));
            r.line(format!("A = {} (mod Z), B = {} (mod Z)", d.a, d.b))
                .line(format!("h = {}", format_bivar(&d.h)))
                .line(format!("absorbed = {}", format_bivar(&d.absorbed)));
            r.check(d.reassemble() == w, "A dlogS + B dlogT + dh + dlog(unit) reassembles the form");
            Ok(r)
        }
        DmodOp::Pullback { coeffs } => {
            let lit = qelem(coeffs)?;
            if lit.support().any(|(n, m)| n < 1 || m < 1) {
                return Err(parse_err("pullback coefficients need exponents n, m >= 1"));
            }
            let map: BTreeMap<(i64, i64), BigRational> = lit.terms().map(|(k, c)| (k, c.clone())).collect();
            let w = phi1_pullback(&map);
            let (p, q) = one_form_text(&w);
            let mut r = Report::new("dmod pullback", json!({ "coeffs": coeffs }));
            r.result = json!({ "dlogS": p, "dlogT": q });
            r.line(format!("dlogS: {p}")).line(format!("dlogT: {q}"));
            Ok(r)
        }
        DmodOp::Image { p, q } => {
            let ok = in_image_test(&one_form(p, q)?).map_err(failed)?;
            let mut r = Report::new("dmod image", json!({ "dlogS": p, "dlogT": q }));
            r.result = json!(ok);
            r.check(ok, "the class lies in the image of the pullback");
            Ok(r)
        }
    }
}

fn verify(c: &Config) -> Result<Report, CliError> {
    let reports = run_all(c.seed);
    let mut r = Report::new("verify", json!({ "seed": c.seed }));
    r.result = json!(reports
        .iter()
        .map(|x| json!({ "criterion": x.id, "name": x.name, "pass": x.pass, "detail": x.detail }))
        .collect::<Vec<_>>());
    for x in &reports {
        r.check(x.pass, &format!("criterion {} {}: {}", x.id, x.name, x.detail));
    }
    Ok(r)
}
