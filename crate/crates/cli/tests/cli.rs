use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn hlzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlzeta")).args(args).env_remove("HLZETA_MAX_DIAGONAL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_csv(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("hlzeta-{}-{name}.csv", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

#[test]
fn eval_power_law() {
    let out = hlzeta(&["eval", "--z", "0", "--t", "0", "--s", "2", "--a", "4"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["value"]["re"], 0.0625);
    assert_eq!(v["reduction_tag"], "power-law");
    assert_eq!(v["converged"], true);
}

#[test]
fn eval_classical_reduction_with_auto() {
    let out = hlzeta(&["eval", "--z", "0.5", "--t", "0", "--s", "1", "--a", "1"]);
    let v = json(&out);
    assert!((v["value"]["re"].as_f64().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-10);
    assert_eq!(v["method"], "closed-kernel");
}

#[test]
fn eval_on_the_unit_circle_uses_the_closed_kernel() {
    // kernel 1/((1 - e^-x)(1 + e^-x)) = Σ e^{-2mx}, so Φ = Σ (2m+1)^{-3} = 7ζ(3)/8
    let out = hlzeta(&["eval", "--z", "1", "--t", "-1", "--s", "3", "--a", "1"]);
    let v = json(&out);
    assert_eq!(v["method"], "closed-kernel");
    assert!((v["value"]["re"].as_f64().unwrap() - 7.0 / 8.0 * 1.202_056_903_159_594_2).abs() < 1e-9, "{v}");
}

#[test]
fn eval_complex_and_negative_arguments() {
    let out = hlzeta(&[
        "eval", "--mu", "2", "--eta", "1.5", "--nu", "3+0.5i", "--z", "-0.4+0.1i", "--t", "-0.2", "--s", "2", "--a", "1.5",
        "--method", "series",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let series = json(&out)["value"].clone();
    let out = hlzeta(&[
        "eval", "--mu", "2", "--eta", "1.5", "--nu", "3+0.5i", "--z", "-0.4+0.1i", "--t", "-0.2", "--s", "2", "--a", "1.5",
        "--method", "quad-m4",
    ]);
    let quad = json(&out)["value"].clone();
    for part in ["re", "im"] {
        assert!((series[part].as_f64().unwrap() - quad[part].as_f64().unwrap()).abs() < 1e-7);
    }
}

#[test]
fn eval_errors_and_exit_codes() {
    // ν = -2 is not allowed
    let out = hlzeta(&["eval", "--nu", "-2", "--z", "0.1", "--t", "0.1", "--s", "2", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "invalid-parameter");
    // outside the unit polydisc
    let out = hlzeta(&["eval", "--z", "1.5", "--t", "0", "--s", "2", "--a", "1", "--method", "series"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "domain");
    // truncated series reports its partial sum
    let out = Command::new(env!("CARGO_BIN_EXE_hlzeta"))
        .args(["eval", "--mu", "2", "--z", "0.9", "--t", "0.8", "--s", "1", "--a", "1", "--method", "series"])
        .env("HLZETA_MAX_DIAGONAL", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = &json(&out)["error"];
    assert_eq!(err["kind"], "no-convergence");
    assert_eq!(err["partial"]["converged"], false);
    // unparsable number is a usage error from clap
    let out = hlzeta(&["eval", "--z", "abc", "--t", "0", "--s", "2", "--a", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_environment_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_hlzeta"))
        .args(["eval", "--z", "0.1", "--t", "0", "--s", "2", "--a", "1"])
        .env("HLZETA_MAX_DIAGONAL", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_jsonl_and_csv() {
    let path = temp_csv("mixed", "z,t,s,a,nu,method\n0,0,2,4,1,auto\n0.5,0,1,1,1,\n0.1,0.1,2,1,-2,\n0.1,x,2,1,1,\n");
    let out = hlzeta(&["batch", path.to_str().unwrap(), "--jobs", "2"]);
    assert!(out.status.success());
    let rows: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["value"]["re"], 0.0625);
    assert!((rows[1]["value"]["re"].as_f64().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-10);
    assert_eq!(rows[2]["error"]["kind"], "invalid-parameter");
    assert_eq!(rows[3]["error"]["kind"], "parse");

    let out = hlzeta(&["batch", path.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("0,0.0625,"));
    std::fs::remove_file(path).ok();
}

#[test]
fn batch_rejects_ill_formed_files() {
    let path = temp_csv("missing", "z,t,s\n0,0,1\n");
    let out = hlzeta(&["batch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(path).ok();
    let out = hlzeta(&["batch", "/nonexistent/input.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_every_identity() {
    let out = hlzeta(&["verify", "--grid", "small", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    for id in ["m4-closed-form", "beta-integral-2d", "shifted-argument-summation", "limit-mu-eta-p-infinite", "swap-symmetry"] {
        assert!(rows.iter().any(|r| r["identity"] == id), "{id}");
    }
    for r in &rows {
        assert_eq!(r["pass"], r["abs_diff"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn verify_fails_under_an_impossible_tolerance() {
    let out = hlzeta(&["verify", "--grid", "small", "--seed", "7", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table_layout() {
    let out = hlzeta(&["table", "--z", "0,0.5", "--t", "0,-0.25", "--s", "2", "--a", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1].split_whitespace().nth(1), Some("0.0625"));
}
