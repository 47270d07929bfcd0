use std::process::Command;

use bjcalc_cli::{run, CliError};

fn bjcalc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bjcalc")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("bjcalc").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn coefficient_table() {
    let (code, out, _) = bjcalc(&["coeffs", "--max", "8"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(
        rows,
        vec![
            vec!["0", "1", "1"],
            vec!["2", "-1/3", "1/6"],
            vec!["4", "7/15", "-1/30"],
            vec!["6", "-31/21", "1/42"],
            vec!["8", "127/15", "-1/30"],
        ]
    );
}

#[test]
fn coefficient_table_json_and_csv() {
    let (code, out, _) = in_process(&["coeffs", "--max", "4", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "table");
    assert_eq!(v["rows"][1]["c"], "-1/3");
    assert_eq!(v["rows"][2]["bernoulli"], "-1/30");
    let (code, out, _) = in_process(&["coeffs", "--max", "2", "--dim", "2", "--output", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("alpha,c,bernoulli\n0 0,1,\n"), "{out}");
    assert!(out.contains("1 1,-1/3,"));
}

#[test]
fn convert_example() {
    let (code, out, _) = bjcalc(&["convert", "--from", "weyl", "--to", "bj", "x^2*p^2"]);
    assert_eq!((code, out.trim()), (0, "x^2*p^2 + (1/6)*hbar^2"));
    let (_, back, _) = in_process(&["convert", "--from", "bj", "--to", "weyl", "x^2*p^2 + (1/6)*hbar^2"]);
    assert_eq!(back.trim(), "x^2*p^2");
}

#[test]
fn convert_between_tau_rules() {
    let (_, out, _) = in_process(&["convert", "--from", "bj", "--to", "tau:0", "x*p"]);
    assert_eq!(out.trim(), "x*p - (1/2)*i*hbar");
    let (_, out, _) = in_process(&["convert", "--from", "tau:0", "--to", "tau:1", "x*p"]);
    assert_eq!(out.trim(), "x*p + i*hbar");
    let (_, out, _) = in_process(&["convert", "--from", "weyl", "--to", "tau:0.25", "x*p"]);
    assert_eq!(out.trim(), "x*p - (1/4)*i*hbar");
}

#[test]
fn quantize_example() {
    let (code, out, _) = bjcalc(&["quantize", "--rule", "bj", "x*p"]);
    assert_eq!((code, out.trim()), (0, "xhat*phat - (1/2)*i*hbar"));
}

#[test]
fn quantize_json_schema() {
    let (code, out, _) = in_process(&["quantize", "--rule", "weyl", "--dim", "2", "x1*p1*p2", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "oppoly");
    assert_eq!(v["dimension"], 2);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        assert_eq!(t["x"].as_array().unwrap().len(), 2);
        assert!(t["coeff"]["re"].is_string() && t["coeff"]["im"].is_string());
        assert!(t["coeff"]["hbar_pow"].is_u64());
    }
}

#[test]
fn verify_small_degree() {
    let (code, out, _) = bjcalc(&["verify", "--max-degree", "4"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 11);
}

#[test]
fn verify_selected_checks_as_json() {
    let (code, out, _) = in_process(&["verify", "--only", "3,4", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(in_process(&["verify", "--only", "99"]).0, 1);
}

#[test]
fn parse_errors_are_positioned_usage_errors() {
    let (code, out, err) = bjcalc(&["quantize", "x^-1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("column 2"), "{err}");
    assert!(err.contains("\n  x^-1\n   ^"), "{err}");
    assert!(!err.contains("panicked"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(in_process(&["quantize", "--rule", "nope", "x"]).0, 1);
    assert_eq!(in_process(&["quantize", "--hbar", "2", "x"]).0, 1);
    assert_eq!(in_process(&["apply", "--symbol", "harmonic", "--grid", "100"]).0, 1);
    assert_eq!(in_process(&["apply", "--symbol", "harmonic", "--state", "squeezed"]).0, 1);
    assert_eq!(in_process(&["quantize", "--max-degree", "2", "x^3"]).0, 1);
    assert_eq!(in_process(&["frobnicate"]).0, 1);
    assert_eq!(in_process(&["--help"]).0, 0);
}

#[test]
fn computation_errors_exit_two() {
    let (code, _, err) = in_process(&["quantize", "--rule", "bj", "tau*x"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.starts_with("error: computation failed"));
}

#[test]
fn exit_codes() {
    assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
    assert_eq!(CliError::Compute(bjcalc::Error::Grid(String::new())).exit_code(), 2);
    assert_eq!(CliError::Verification(vec![1], String::new()).exit_code(), 3);
}

#[test]
fn apply_harmonic_ground_state() {
    let (code, out, _) = bjcalc(&["apply", "--symbol", "harmonic", "--state", "gaussian", "--scheme", "bj-quadrature"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.starts_with("expectation")).unwrap();
    let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((value - 0.5).abs() < 1e-10);
}

#[test]
fn apply_null_symbol() {
    // x0 = 16Δ, p0 = 32·2π/L on the default grid, so x0·p0 = 2π
    let x0 = 16.0 * 20.0 / 512.0;
    let p0 = 32.0 * 2.0 * std::f64::consts::PI / 20.0;
    let sym = format!("sinc-null:{x0}:{p0}");
    let norm = |scheme: &str| -> f64 {
        let (_, out, _) = in_process(&["apply", "--symbol", &sym, "--scheme", scheme]);
        let line = out.lines().find(|l| l.starts_with("output norm")).unwrap();
        line.split_whitespace().nth(2).unwrap().parse().unwrap()
    };
    assert!(norm("bj-sinc") < 1e-4);
    assert!(norm("weyl") > 0.1);
}

#[test]
fn csv_round_trip_through_identity() {
    let path = std::env::temp_dir().join(format!("bjcalc-cli-{}.csv", std::process::id()));
    let (code, csv, _) = in_process(&["apply", "--symbol", "1", "--state", "gaussian", "--grid", "128", "--box", "24", "--output", "csv"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("x,re,im\n"));
    std::fs::write(&path, &csv).unwrap();
    let (code, again, err) = in_process(&[
        "apply", "--symbol", "1", "--input", path.to_str().unwrap(), "--grid", "128", "--box", "24", "--output", "csv",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0, "{err}");
    let parse = |text: &str| -> Vec<f64> {
        text.lines().skip(1).flat_map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>()).collect()
    };
    for (a, b) in parse(&csv).iter().zip(parse(&again)) {
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }
    let (code, _, err) = in_process(&["apply", "--symbol", "1", "--input", "/nonexistent.csv", "--grid", "64"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn grid_json_envelope() {
    let (code, out, _) = in_process(&["apply", "--symbol", "x", "--grid", "32", "--box", "12", "--hbar", "0.5", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "grid");
    assert_eq!(v["N"], 32);
    assert_eq!(v["L"], 12.0);
    assert_eq!(v["hbar"], 0.5);
    assert_eq!(v["values"].as_array().unwrap().len(), 32);
}

#[test]
fn output_is_deterministic() {
    let args = ["apply", "--symbol", "x^2*p^2", "--state", "hermite:1", "--scheme", "bj-sinc", "--grid", "128"];
    assert_eq!(bjcalc(&args).1, bjcalc(&args).1);
    let args = ["quantize", "--rule", "tau", "--dim", "2", "x1^2*p1*p2^2 + x2"];
    assert_eq!(bjcalc(&args).1, bjcalc(&args).1);
}
