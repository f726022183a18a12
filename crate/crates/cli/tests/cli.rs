use std::process::{Command, Output};

use lcft_core::gf::FieldDesc;
use lcft_core::series::literal::{fq_series, hat_series, parse_literal};
use lcft_core::series::Var;

fn lcft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcft"))
        .args(args)
        .env_remove("LCFT_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lubin_tate_fiber_example() {
    let o = lcft(&["lt", "fiber", "--q", "2", "--m", "2", "--prec", "16"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PASS: F(g) = (−T+That)·g");
}

#[test]
fn artin_hasse_example() {
    let o = lcft(&["ah", "F", "--p", "2", "--prec", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + t + t^3 + t^4 (mod t^5)");
}

#[test]
fn aj_check_rejects_one() {
    let o = lcft(&["aj", "check", "1 (mod That^4)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("condition (1) fails"));
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(lcft(&["aj", "check", "1 + (mod"]).status.code(), Some(2));
    assert_eq!(lcft(&["twodim", "galois", "--window", "4"]).status.code(), Some(2));
    assert_eq!(lcft(&["lt", "fiber", "--q", "6"]).status.code(), Some(2));
    assert_eq!(lcft(&["bogus"]).status.code(), Some(2));
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lcft"))
        .args(["ah", "F", "--p", "3"])
        .env("LCFT_PREC", "4")
        .output()
        .unwrap();
    assert!(stdout(&o).trim().ends_with("(mod t^4)"));
}

#[test]
fn json_has_the_documented_fields() {
    let o = lcft(&["--format", "json", "recip", "as", "--a", "1", "--n", "3", "--field", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["command", "inputs", "result", "certificates"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "recip as");
    let f2 = FieldDesc::prime(2).unwrap();
    let rhs = fq_series(v["result"].as_str().unwrap(), Var::T, &f2, None).unwrap();
    assert_eq!(rhs.terms().map(|(e, _)| e).collect::<Vec<_>>(), vec![-3]);
}

#[test]
fn out_file_is_written() {
    let dir = std::env::temp_dir().join(format!("lcft-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = lcft(&["twodim", "fiber", "--window", "2,2", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn printed_literals_reparse() {
    let f2 = FieldDesc::prime(2).unwrap();
    let o = lcft(&["--format", "json", "aj", "ratio", "1 - T*That^-1 (mod That^8) (mod T^9)", "1 - T*That^-1 + T*That - T^2 (mod That^8) (mod T^9)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = v["result"].as_str().unwrap();
    let back = hat_series(text, &f2, None, None).unwrap();
    assert_eq!(lcft_core::series::literal::format_nested(&back), text);

    let o = lcft(&["--format", "json", "twodim", "normalform", "--window", "6,6", "--q", "4", "S^2*T^2 + [0,1]*S*T^-1 + S^-2*T^-4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for s in [&v["result"], &v["certificates"]["witness"], &v["certificates"]["discarded"]] {
        parse_literal(s.as_str().unwrap()).unwrap();
    }
}

#[test]
fn dmod_accepts_negative_literals() {
    let o = lcft(&["dmod", "image", "-3*S^-1*T^-1 - 2*S^-2*T^-1", "-3*S^-1*T^-1 - S^-2*T^-1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lcft(&["dmod", "image", "1/2", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_is_deterministic() {
    let a = lcft(&["verify", "--seed", "11", "--format", "json"]);
    let b = lcft(&["verify", "--seed", "11", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}
