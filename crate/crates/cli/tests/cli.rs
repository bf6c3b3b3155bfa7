use std::process::{Command, Output};

use serde_json::Value;

fn autratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autratio"))
        .args(args)
        .output()
        .expect("spawn autratio")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok_lines(args: &[&str]) -> Vec<String> {
    let o = autratio(args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o).lines().map(str::to_string).collect()
}

fn json(args: &[&str]) -> (i32, Value) {
    let o = autratio(args);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    (o.status.code().unwrap(), v)
}

#[test]
fn f_values() {
    assert_eq!(ok_lines(&["f", "C2"]), ["1/2"]);
    assert_eq!(ok_lines(&["f", "C1"]), ["1"]);
    assert_eq!(ok_lines(&["f", "C2^3"]), ["21"]);
    assert_eq!(ok_lines(&["f", "C2 x C2"]), ["3/2"]);
    assert_eq!(ok_lines(&["f", "--phi", "C2 x C4"]), ["2"]);
    assert_eq!(ok_lines(&["f", "C3 x C9"]), ["4"]);
}

#[test]
fn aut_and_oracle() {
    assert_eq!(ok_lines(&["aut", "C2^3"]), ["168"]);
    assert_eq!(ok_lines(&["aut", "--oracle", "C2 x C4"]), ["8 8 match"]);
    assert_eq!(ok_lines(&["oracle", "C3^2"]), ["48 48 match"]);
    let o = autratio(&["aut", "--oracle", "C1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn approx_examples() {
    let out = ok_lines(&["approx", "1", "--eps", "1e-6"]).join("\n");
    assert!(out.contains("f = 1 (exact)"), "{out}");

    let out = ok_lines(&["approx", "0.5", "--eps", "1e-9", "--materialize"]).join("\n");
    assert!(out.contains("literal: C2\n"), "{out}");

    let out = ok_lines(&["approx", "2", "--eps", "1e-3"]).join("\n");
    assert!(out.contains("(certified)"), "{out}");
    assert!(out.contains("status: converged"), "{out}");
}

#[test]
fn approx_json_is_exact_within_tolerance() {
    let (code, v) = json(&["approx", "3/10", "--eps", "1/1000", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let r = &v["result"];
    assert_eq!(r["certified"], true);
    assert_eq!(r["status"], "converged");
    let exact: num_rational::BigRational = r["achieved"]["exact"].as_str().unwrap().parse().unwrap();
    let a = num_rational::BigRational::new(3.into(), 10.into());
    let eps = num_rational::BigRational::new(1.into(), 1000.into());
    assert!(exact >= a && exact < a + eps);
}

#[test]
fn approx_refusals() {
    let o = autratio(&["approx", "2", "--eps", "1e-40"]);
    assert_eq!(o.status.code(), Some(2));
    let o = autratio(&["approx", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_autratio"))
        .args(["approx", "0.01", "--eps", "1e-3"])
        .env("AUTRATIO_SIEVE_CEILING", "10000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity_exhausted"));
}

#[test]
fn search_examples() {
    assert_eq!(ok_lines(&["search", "1", "--max-order", "8"]), ["C1", "C2 x C4"]);
    assert_eq!(ok_lines(&["search", "1/2", "--max-order", "8"]), ["C2", "C4", "C8"]);
    assert_eq!(
        ok_lines(&["search", "5", "--max-order", "4"]),
        ["no witness within bounds (max_order=4)"]
    );
    let o = autratio(&["search", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_json_witnesses_reverify() {
    let (code, v) = json(&["search", "3/2", "--max-order", "64", "--json"]);
    assert_eq!(code, 0);
    let ws = v["result"]["witnesses"].as_array().unwrap();
    assert!(!ws.is_empty());
    for w in ws {
        let lit = w["group"].as_str().unwrap();
        assert_eq!(ok_lines(&["f", lit]), ["3/2"], "{lit}");
    }
}

fn partitions(n: u64) -> u64 {
    let n = n as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p[n]
}

fn abelian_count(mut n: u64) -> u64 {
    let mut total = 1;
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        total *= partitions(e);
        d += 1;
    }
    total
}

#[test]
fn table_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (max, expected) in [(2u64, 2usize), (8, 11), (100, (1..=100).map(abelian_count).sum::<u64>() as usize)] {
        let path = dir.path().join(format!("t{max}.tsv"));
        let p = path.to_str().unwrap();
        let out = ok_lines(&["table", "--max-order", &max.to_string(), "--out", p]);
        assert_eq!(out, [format!("{expected} rows written to {p}")]);
        let body = std::fs::read_to_string(&path).unwrap();
        let mut lines = body.lines();
        assert_eq!(lines.next().unwrap(), format!("# autratio f-table v1 max_order={max}"));
        assert_eq!(lines.count(), expected);
    }
}

#[test]
fn json_envelope_shape() {
    let (code, v) = json(&["f", "C2 x C4", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "f");
    assert_eq!(v["status"], "ok");
    assert!(v["error"].is_null());
    assert_eq!(v["inputs"]["group"], "C2 x C4");
    assert_eq!(v["result"]["value"], "1/1");
    assert_eq!(v["result"]["aut_order"], "8");

    let (code, v) = json(&["f", "C0", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("C0"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["approx", "2.5", "--eps", "1e-4", "--json"][..],
        &["search", "2", "--max-order", "200", "--json"][..],
    ] {
        assert_eq!(stdout(&autratio(args)), stdout(&autratio(args)));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(autratio(&[]).status.code(), Some(1));
    assert_eq!(autratio(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(autratio(&["f", "C2 y C3"]).status.code(), Some(1));
    assert_eq!(autratio(&["--help"]).status.code(), Some(0));
}
