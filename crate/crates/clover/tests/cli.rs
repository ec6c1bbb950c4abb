use std::process::{Command, Output};

use clover::{parse_tuple_arg, read_table_csv, table_from_json, table_to_json, write_table_csv, TupleConfig};
use clover_core::monomials::growth_table;
use clover_core::params::ParameterTuple;

fn clover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clover")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn growth_csv_matches_library() {
    let o = clover(&["growth", "--p", "2", "--tuple", "constant:1,1", "--max-weight", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_table_csv(stdout(&o).as_bytes()).unwrap();
    let t = ParameterTuple::constant(2, 1, 1).unwrap();
    let lib = growth_table(&t, 200).unwrap();
    assert_eq!(rows.len(), 200);
    for (a, b) in rows.iter().zip(&lib.rows) {
        assert_eq!((&a.m, a.total()), (&b.m, b.total()));
        assert_eq!(a.counts.power_first(), b.counts.power_first());
    }
    assert!(stdout(&o)
        .starts_with("m,gamma_total,first,second,power_first,power_second,log_gamma_over_log_m\n1,3,"));
}

#[test]
fn json_table_round_trip_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let path = path.to_str().unwrap();
    let o = clover(&[
        "growth",
        "--p",
        "2",
        "--tuple",
        "constant:1,1",
        "--max-weight",
        "6561",
        "--format",
        "json",
        "--out",
        path,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let table = table_from_json(&doc).unwrap();
    assert_eq!(table.tuple, ParameterTuple::constant(2, 1, 1).unwrap());
    assert_eq!(table.rows.len(), 6561);

    let o = clover(&["fit", "--in", path, "--level", "gk"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let beta = v["beta"].as_f64().unwrap();
    assert!((1.5..2.2).contains(&beta), "beta {beta}");
}

#[test]
fn csv_round_trip() {
    let t = ParameterTuple::parse(3, "periodic:1,1;1,2").unwrap();
    let table = growth_table(&t, 500).unwrap();
    let mut buf = Vec::new();
    write_table_csv(&table, &mut buf).unwrap();
    let rows = read_table_csv(buf.as_slice()).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.total()).collect::<Vec<_>>(),
        table.rows.iter().map(|r| r.total()).collect::<Vec<_>>()
    );
    let doc = table_to_json(&table);
    assert_eq!(table_from_json(&doc).unwrap().rows.len(), 500);
}

#[test]
fn csv_rejects_bad_totals() {
    let text = "m,gamma_total,first,second,power_first,power_second,log_gamma_over_log_m\n1,4,2,1,0,0,\n";
    assert!(read_table_csv(text.as_bytes()).is_err());
}

#[test]
fn tuple_json_forms() {
    let cases = [
        (r#"{"p":2,"kind":"constant","params":{"S":1,"R":2}}"#, "constant:1,2"),
        (r#"{"p":3,"kind":"periodic","params":{"pairs":[[1,1],[2,1]]},"length":4}"#, "periodic:1,1;2,1"),
        (r#"{"p":2,"kind":"kappa","params":{"kappa":0.5}}"#, "kappa:1/2"),
        (r#"{"p":2,"kind":"qkappa","params":{"q":1,"kappa":"1"}}"#, "qkappa:1,1"),
        (r#"{"p":5,"kind":"explicit","params":{"pairs":[[1,1],[3,2]]}}"#, "explicit:1,1;3,2"),
    ];
    for (json, spec) in cases {
        let t = parse_tuple_arg(None, json).unwrap();
        assert_eq!(t.rule().to_string(), spec);
        let back = TupleConfig::from_tuple(&t).to_tuple().unwrap();
        assert_eq!(back, t);
    }
    assert!(parse_tuple_arg(Some(3), r#"{"p":2,"kind":"constant","params":{"S":1,"R":1}}"#).is_err());
    assert!(
        parse_tuple_arg(None, r#"{"p":2,"kind":"explicit","params":{"pairs":[[1,1]]},"length":3}"#).is_err()
    );
    assert!(parse_tuple_arg(None, "constant:1,1").is_err());
}

#[test]
fn basis_check_reports_json_lines() {
    let o = clover(&["basis", "--p", "2", "--tuple", "constant:1,1", "--depth", "4", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 20);
    for l in &lines {
        for key in ["suite", "check-id", "params", "status", "witness"] {
            assert!(l.get(key).is_some(), "missing {key}");
        }
        assert_ne!(l["status"], "fail");
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("suite"));
}

#[test]
fn gk_and_scan() {
    let o = clover(&["gk", "--p", "2", "--S", "1", "--R", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l = v["lambda"][0].as_f64().unwrap();
    assert!((l - 1.8928).abs() < 1e-4);

    let o = clover(&["gk", "--scan", "--p", "2", "--max", "16", "--interval", "1.1,2.9"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 256);
    assert_eq!(v["all_in_range"], true);
    // A 16x16 grid leaves gaps wider than 0.1 near the top of the window.
    let gap = v["max_gap"].as_f64().unwrap();
    assert_eq!(o.status.code(), Some(if gap <= 0.1 { 0 } else { 1 }));
}

#[test]
fn nil_is_reproducible() {
    let args =
        ["nil", "--p", "2", "--tuple", "constant:1,1", "--depth", "4", "--samples", "30", "--seed", "7"];
    let (a, b) = (clover(&args), clover(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["conclusive"].as_u64().unwrap() + v["inconclusive"].as_u64().unwrap(), 30);
    // No ambient entropy: the seed is mandatory.
    let o = clover(&["nil", "--p", "2", "--tuple", "constant:1,1", "--depth", "4", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_suites() {
    let o = clover(&["bounds", "--p", "3", "--tuple", "constant:1,1", "--max-weight", "3000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"suite\":\"sandwich\""));
    let o = clover(&["bounds", "--p", "2", "--tuple", "kappa:0.5", "--max-weight", "2295"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"suite\":\"quasilinear\""));
    // The quasi-linear bounds need R = 1.
    let o = clover(&[
        "bounds",
        "--p",
        "2",
        "--tuple",
        "constant:1,2",
        "--max-weight",
        "100",
        "--suite",
        "quasilinear",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["growth", "--p", "4", "--tuple", "constant:1,1", "--max-weight", "5"][..],
        &["growth", "--p", "2", "--tuple", "nonsense", "--max-weight", "5"],
        &["gk", "--p", "2"],
        &["fit", "--in", "/nonexistent.csv", "--level", "gk"],
        &["frobnicate"],
    ] {
        assert_eq!(clover(args).status.code(), Some(2), "{args:?}");
    }
}
