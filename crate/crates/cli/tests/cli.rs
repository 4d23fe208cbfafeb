use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shadowsum"));
    // keep the caller's environment from leaking into the configuration
    for (k, _) in std::env::vars() {
        if k.starts_with("SHADOWSUM_") {
            c.env_remove(k);
        }
    }
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn complex(v: &Value) -> (f64, f64) {
    let f = |k: &str| v[k].as_str().unwrap().parse::<f64>().unwrap();
    (f("re"), f("im"))
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).hypot(a.1 - b.1) <= 1e-9
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    serde_json::from_str::<Value>(text.trim()).unwrap()["error"].clone()
}

#[test]
fn sphere_gleam_zero_is_one() {
    let out = run(&["--format", "json", "--r", "5", "invariant", data("sphere-gleam-0.json").to_str().unwrap()]);
    assert!(out.status.success());
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["pipeline"], "shadow");
    assert!(close(complex(&rec["value"]), (1.0, 0.0)));
    assert_eq!(rec["colorings"], 4);
}

#[test]
fn empty_link_is_eta() {
    let out = run(&["--format", "json", "--r", "5", "--root-exponent", "1", "invariant", data("empty-link.json").to_str().unwrap()]);
    assert!(out.status.success());
    let rec = &json_lines(&out)[0];
    let eta = (2.0f64 / 5.0).sqrt() * (std::f64::consts::PI / 5.0).sin();
    assert_eq!(rec["pipeline"], "surgery");
    assert!(close(complex(&rec["value"]), (eta, 0.0)));
}

#[test]
fn values_have_fifteen_significant_digits() {
    let out = run(&["--format", "json", "invariant", data("unknot-framing-3.json").to_str().unwrap()]);
    let rec = &json_lines(&out)[0];
    for s in [&rec["value"]["re"], &rec["value"]["im"], &rec["abs"]] {
        let mantissa = s.as_str().unwrap().trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        assert_eq!(mantissa.len(), 15, "{s}");
    }
}

#[test]
fn malformed_file_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"regions": [{"id": "R", "gleam": 0, "chi": 2}]}"#).unwrap();
    let out = run(&["invariant", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_record(&out);
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["exit_code"], 2);
    assert!(e["message"].as_str().unwrap().contains("`gleam`"), "{e}");

    std::fs::write(&bad, r#"{"family": "unknot", "n": 1, "g": 2}"#).unwrap();
    let out = run(&["invariant", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["message"].as_str().unwrap().contains("`g`"));

    std::fs::write(&bad, r#"{"shape": 1}"#).unwrap();
    let out = run(&["invariant", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["message"].as_str().unwrap().contains("`shape`"));
}

#[test]
fn invalid_shadow_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"regions": [{"id": "R", "gleam2": 1, "chi": 2}]}"#).unwrap();
    let out = run(&["invariant", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["kind"], "invalid_shadow");
}

#[test]
fn budget_and_root_errors() {
    let out = run(&["--budget", "1", "invariant", data("handleslid-unlink.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["kind"], "budget_exceeded");
    let out = run(&["--r", "4", "--root-exponent", "2", "invariant", data("empty-link.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["kind"], "invalid_root");
    let out = run(&["table", "lens_surgery", "--n-range", "3:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_up_to_timing() {
    let strip = |out: Output| -> Vec<Value> {
        json_lines(&out)
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("elapsed_ms").unwrap();
                v
            })
            .collect()
    };
    for file in ["sphere-gleam-3.json", "hopf-omega-1-1.json"] {
        let path = data(file);
        let args = ["--format", "json", "--r", "6", "invariant", path.to_str().unwrap()];
        assert_eq!(strip(run(&args)), strip(run(&args)));
    }
    let args = ["--format", "json", "table", "surface_gleam", "--r-range", "3:5", "--g-range", "0:2", "--n-range=-1:1"];
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn lens_tables_agree_under_plus() {
    for family in ["lens_surgery", "lens_shadow"] {
        let out = run(&["--format", "json", "table", family, "--r-range", "3:6", "--n-range=-3:3"]);
        assert!(out.status.success());
        let recs = json_lines(&out);
        assert_eq!(recs.len(), 4 * 7);
        assert!(recs.iter().all(|r| r["cross_check"]["agree"] == true));
    }
    let out = run(&["--format", "json", "--phase-sign", "minus", "table", "lens_shadow", "--r-range", "3:6", "--n-range=-3:3"]);
    assert!(json_lines(&out).iter().any(|r| r["cross_check"]["agree"] == false));
}

#[test]
fn connected_sums_match_closed_form() {
    let out = run(&["--format", "json", "--r", "7", "table", "connected_sums", "--g-range", "0:5"]);
    let recs = json_lines(&out);
    assert_eq!(recs.len(), 6);
    for r in &recs {
        assert_eq!(r["cross_check"]["pipeline"], "closed_form");
        assert_eq!(r["cross_check"]["agree"], true);
    }
}

#[test]
fn torus_with_gleam_zero_counts_colorings() {
    let out = run(&["--format", "json", "table", "surface_gleam", "--r-range", "3:6", "--g-range", "1", "--n-range", "0"]);
    for (i, rec) in json_lines(&out).iter().enumerate() {
        let r = 3.0 + i as f64;
        assert!(close(complex(&rec["value"]), (r - 1.0, 0.0)));
    }
}

#[test]
fn environment_overrides_defaults() {
    let out = bin()
        .env("SHADOWSUM_R", "3")
        .env("SHADOWSUM_FORMAT", "json")
        .args(["invariant", data("torus-gleam-0.json").to_str().unwrap()])
        .output()
        .unwrap();
    let rec = &json_lines(&out)[0];
    assert_eq!(rec["r"], 3);
    assert!(close(complex(&rec["value"]), (2.0, 0.0)));
    // flags beat the environment
    let out = bin()
        .env("SHADOWSUM_R", "3")
        .args(["--r", "4", "--format", "json", "invariant", data("torus-gleam-0.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(json_lines(&out)[0]["r"], 4);
}

#[test]
fn csv_has_a_header_and_one_row_per_tuple() {
    let out = run(&["--format", "csv", "table", "lens_shadow", "--r-range", "3:4", "--n-range=-1:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[0].starts_with("input,r,k,phase_sign,pipeline,re,im,abs"));
    assert_eq!(lines.len(), 1 + 2 * 3);
}

#[test]
fn selftest_passes_at_small_levels() {
    for r in ["3", "5"] {
        let out = run(&["--format", "json", "--r", r, "selftest", "--max-label-sum", "4"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        let recs = json_lines(&out);
        assert_eq!(recs.len(), 10);
        assert!(recs.iter().all(|c| c["passed"] == true && !c["certifies"].as_str().unwrap().is_empty()));
    }
}
