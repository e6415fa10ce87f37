use std::io::Write;
use std::process::{Command, Output};

use zetaforge::algebra::{assign, rat, RationalFunction, Var};

fn zetaforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(args)
        .env_remove("ZETAFORGE_PARALLELISM")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse(s: &str) -> RationalFunction {
    s.trim().parse().unwrap()
}

#[test]
fn beta_rank_two_symbolic() {
    let o = zetaforge(&["beta", "--rank", "2", "--symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    // β₂ = (N/(q-1))·(1 + N/(q²-1)), written out over a common denominator.
    let expected = parse("(N*q^2+N^2-N)/(q^3-q^2-q+1)");
    assert_eq!(parse(&stdout(&o)), expected);
}

#[test]
fn beta_coprime_degree() {
    let o = zetaforge(&["beta", "--rank", "2", "--degree", "1", "--symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse(&stdout(&o)), parse("N/(q-1)"));
    let neg = zetaforge(&["beta", "--rank", "3", "--degree", "-1", "--symbolic"]);
    assert_eq!(parse(&stdout(&neg)), parse("N/(q-1)"));
}

#[test]
fn alpha_numeric_value() {
    let o = zetaforge(&["alpha", "--rank", "3", "--q", "2", "--N", "3"]);
    assert_eq!(o.status.code(), Some(0));
    // α₃ = β₂ = (N/(q-1))(1 + N/(q²-1)) at q=2, N=3: 3·(1 + 1) = 6.
    let value = parse(&stdout(&o));
    let oracle = rat(3) * (rat(1) + rat(3) / rat(3));
    assert_eq!(value.as_constant(), Some(oracle));
    let json = zetaforge(&["alpha", "--rank", "2", "--q", "5", "--N", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(parse(v["alpha"].as_str().unwrap()).as_constant(), Some(rat(7) / rat(4)));
}

#[test]
fn genus_two_beta() {
    let o = zetaforge(&["beta", "--rank", "1", "--q", "3", "--genus", "2", "--numerator", "1+t+2*t^2+3*t^3+9*t^4"]);
    assert_eq!(o.status.code(), Some(0));
    // β₁ = P(1)/(q-1) = 16/2.
    assert_eq!(parse(&stdout(&o)).as_constant(), Some(rat(8)));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["beta", "--rank", "2"][..],
        &["beta", "--rank", "0", "--symbolic"],
        &["beta", "--rank", "9", "--symbolic"],
        &["alpha", "--rank", "2", "--q", "6", "--N", "3"],
        &["alpha", "--rank", "2", "--q", "5", "--N", "20"],
        &["alpha", "--rank", "2", "--q", "3", "--genus", "2", "--numerator", "1+t+2*t^2+3*t^3+9*t^4"],
        &["verify", "nonsense"],
        &["verify", "rh", "--max-q", "2048"],
        &["verify", "period-match", "--n", "6"],
        &["zeros", "--curve", "0,0"],
        &["bogus"],
    ] {
        let o = zetaforge(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn environment_parallelism_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(["verify", "uniformity"])
        .env("ZETAFORGE_PARALLELISM", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_counting_miracle_records() {
    let o = zetaforge(&["verify", "counting-miracle", "--max-rank", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    let ranks: Vec<i64> = lines.iter().map(|l| l["params"]["r"].as_i64().unwrap()).collect();
    assert_eq!(ranks, [2, 3, 4, 5, 6]);
    assert!(lines.iter().all(|l| l["status"] == "pass"));
}

#[test]
fn verify_sl3_factor_prints_quotient() {
    let o = zetaforge(&["verify", "sl3-factor"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let q = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|l| l["check"] == "sl3-quotient")
        .unwrap();
    assert!(q["witness"].as_str().unwrap().contains("T^2"));
}

#[test]
fn verify_small_rh_sweep() {
    let o = zetaforge(&["verify", "rh", "--max-rank", "3", "--max-q", "9", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("== rh"));
    assert!(!out.contains(" fail "));
}

#[test]
fn config_file_and_flag_precedence() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "max-rank = 3\nparallelism = 1").unwrap();
    let path = f.path().to_str().unwrap();
    let o = zetaforge(&["verify", "counting-miracle", "--config", path]);
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = zetaforge(&["verify", "counting-miracle", "--config", path, "--max-rank", "4"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "max-rank = \"three\"").unwrap();
    let o = zetaforge(&["verify", "counting-miracle", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zeros_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = zetaforge(&["zeros", "--curve", "1,1", "--primes-up-to", "3000", "--ranks", "2,3", "--bins", "12", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["ranks"][0]["rank"], 2);
    let mean: f64 = summary["ranks"][0]["mean"].as_str().unwrap().parse().unwrap();
    assert!((mean - std::f64::consts::PI / 3.0).abs() < 0.05);
    let samples = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert!(samples.starts_with("p,N,theta,theta2,theta3\n5,9,"));
    let h = std::fs::read_to_string(dir.path().join("histogram_theta2.csv")).unwrap();
    assert_eq!(h.lines().count(), 13);
    assert!(dir.path().join("histogram_theta.csv").exists());
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn zeros_from_ap_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("data.csv");
    std::fs::write(&table, "p,ap\n5,-3\n7,3\n11,-2\n").unwrap();
    let out = dir.path().join("out");
    let o = zetaforge(&["zeros", "--ap-table", table.to_str().unwrap(), "--ranks", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let samples = std::fs::read_to_string(out.join("samples.csv")).unwrap();
    assert!(samples.starts_with("p,N,theta,theta2\n5,9,"));
    std::fs::write(&table, "p,ap\n7,10\n").unwrap();
    let o = zetaforge(&["zeros", "--ap-table", table.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn small_report_is_deterministic() {
    let args = [
        "report", "--max-rank", "4", "--max-q", "16", "--max-n", "4", "--primes-up-to", "5000",
    ];
    let a = zetaforge(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = Command::new(env!("CARGO_BIN_EXE_zetaforge"))
        .args(args)
        .env("ZETAFORGE_PARALLELISM", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(doc["summary"]["pass"].as_u64().unwrap() >= 25);
    assert_eq!(doc["summary"]["fail"], 0);
    let text = zetaforge(&[&args[..], &["--format", "text"]].concat());
    assert!(stdout(&text).contains("replication report"));
}

#[test]
fn symbolic_output_evaluates_like_library() {
    let o = zetaforge(&["beta", "--rank", "3", "--symbolic"]);
    let v = parse(&stdout(&o));
    let at = assign([(Var::Q, rat(4)), (Var::N, rat(5))]);
    // (N/(q-1))(1 + (q+2)N/(q³-1) + N²/((q³-1)(q²-1))) at q=4, N=5.
    let oracle = rat(5) / rat(3) * (rat(1) + rat(30) / rat(63) + rat(25) / rat(63 * 15));
    assert_eq!(v.evaluate(&at).unwrap(), oracle);
}
