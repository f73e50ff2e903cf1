use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn spinon(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinon"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPINON_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

/// Data rows of a CSV file as numbers (empty fields become NaN).
fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn header(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    let line = text.lines().find(|l| !l.starts_with('#')).unwrap();
    line.split(',').map(String::from).collect()
}

fn meta(path: &Path, key: &str) -> Option<String> {
    let prefix = format!("# {key}: ");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix(&prefix).map(String::from))
}

fn field(line: &str, key: &str) -> String {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {line}"))
        .to_string()
}

#[test]
fn dispersion_xxx_table() {
    let dir = TempDir::new().unwrap();
    ok(&spinon(&["dispersion", "--model", "xxx", "--min=-5", "--max", "5", "--points", "101"], dir.path()));
    let path = dir.path().join("dispersion_xxx.csv");
    assert_eq!(header(&path), ["beta", "e", "p"]);
    let r = rows(&path);
    assert_eq!(r.len(), 101);
    assert!(r.iter().any(|row| row[0] == 0.0 && row[1] == PI && row[2] == -FRAC_PI_2));
    assert_eq!(meta(&path, "schema_version").as_deref(), Some("1"));
}

#[test]
fn dispersion_xxz_tau_is_unimodular() {
    let dir = TempDir::new().unwrap();
    ok(&spinon(&["dispersion", "--model", "xxz", "--q=-0.5"], dir.path()));
    let path = dir.path().join("dispersion_xxz.csv");
    assert_eq!(header(&path), ["alpha", "e", "p", "tau_abs"]);
    for row in rows(&path) {
        assert!((row[3] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn dispersion_rejects_q_outside_the_interval() {
    let dir = TempDir::new().unwrap();
    let out = spinon(&["dispersion", "--model", "xxz", "--q", "0.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(-1, 0)"));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none(), "no partial output");
}

#[test]
fn dcf_point_in_band() {
    let dir = TempDir::new().unwrap();
    let out = spinon(&["dcf-point", &PI.to_string(), &PI.to_string()], dir.path());
    ok(&out);
    let line = String::from_utf8(out.stdout).unwrap();
    let s_pm: f64 = field(&line, "s_pm").parse().unwrap();
    let s_xx: f64 = field(&line, "s_xx").parse().unwrap();
    assert!((s_pm - 0.30991950197266157353).abs() < 1e-8 * s_pm);
    assert_eq!(s_xx, 4.0 * s_pm);
    assert_eq!(field(&line, "in_band"), "true");
    let b1: f64 = field(&line, "beta1").parse().unwrap();
    let b2: f64 = field(&line, "beta2").parse().unwrap();
    assert!(b1 < b2);
}

#[test]
fn dcf_point_out_of_band() {
    let dir = TempDir::new().unwrap();
    let out = spinon(&["dcf-point", &(3.0 * PI).to_string(), &FRAC_PI_2.to_string()], dir.path());
    ok(&out);
    let line = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&line, "s_pm").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&line, "s_xx").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&line, "in_band"), "false");
    assert!(!line.contains("beta1"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["dcf-point", "abc", "1.0"][..],
        &["dcf-point", "1.0"],
        &["dcf-point", "1.0", "9.0"],
        &["dcf-grid", "--n-k", "1"],
        &["ed", "--sites", "7"],
        &["nonsense"],
        &["--rel-tol=-1", "dcf-point", "1", "1"],
    ] {
        let out = spinon(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_halves_reflect() {
    let dir = TempDir::new().unwrap();
    let left = dir.path().join("left.csv");
    let right = dir.path().join("right.csv");
    let pi = PI.to_string();
    let two_pi = (2.0 * PI).to_string();
    let common = ["--n-k", "41", "--n-w", "60", "--w-min", "0", "--w-max", "7"];
    let mut a = vec!["dcf-grid", "--k-min", "0", "--k-max", &pi, "--output", left.to_str().unwrap()];
    a.extend(common);
    let mut b = vec!["dcf-grid", "--k-min", &pi, "--k-max", &two_pi, "--output", right.to_str().unwrap()];
    b.extend(common);
    ok(&spinon(&a, dir.path()));
    ok(&spinon(&b, dir.path()));
    let (l, r) = (rows(&left), rows(&right));
    assert_eq!(l.len(), 41 * 60);
    // k-major rows: (k_i, w_j) mirrors (k_{40-i}, w_j)
    for i in 0..41 {
        for j in 0..60 {
            let x = &l[i * 60 + j];
            let y = &r[(40 - i) * 60 + j];
            assert!((x[0] + y[0] - 2.0 * PI).abs() < 1e-12);
            assert_eq!(x[1], y[1]);
            assert!((x[2] - y[2]).abs() <= 1e-10 * x[2].abs().max(1.0), "k={} w={}", x[0], x[1]);
        }
    }
}

#[test]
fn grid_output_is_deterministic_across_workers() {
    let dir = TempDir::new().unwrap();
    let mut files = Vec::new();
    for w in ["1", "3", "1"] {
        let out = dir.path().join(format!("g{w}{}.json", files.len()));
        ok(&spinon(
            &["--format", "json", "dcf-grid", "--n-k", "30", "--n-w", "30", "--workers", w, "--output", out.to_str().unwrap()],
            dir.path(),
        ));
        files.push(std::fs::read(out).unwrap());
    }
    assert!(files.windows(2).all(|p| p[0] == p[1]));
    let doc: serde_json::Value = serde_json::from_slice(&files[0]).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 900);
}

#[test]
fn sumrule_matches_reference_weights() {
    let dir = TempDir::new().unwrap();
    let k = format!("{},2", FRAC_PI_2);
    ok(&spinon(&["sumrule", "--k", &k], dir.path()));
    let path = dir.path().join("sumrule.csv");
    let r = rows(&path);
    assert_eq!(r.len(), 2);
    for (row, want) in r.iter().zip([0.86927654068540116672, 1.2449034120230448863]) {
        assert!((row[3] - want).abs() < 1e-6 * want);
        assert_eq!(row[5], 4.0 * row[3]);
    }
}

#[test]
fn sumrule_at_pi_reports_the_divergence() {
    let dir = TempDir::new().unwrap();
    ok(&spinon(&["sumrule", "--k", &PI.to_string()], dir.path()));
    let path = dir.path().join("sumrule.csv");
    assert!(meta(&path, "divergent_at").is_some());
    assert!(rows(&path)[0][3].is_nan());
}

#[test]
fn ed_lines_sit_on_the_band() {
    let dir = TempDir::new().unwrap();
    ok(&spinon(&["ed", "--sites", "8"], dir.path()));
    for f in ["ed_n8_lines.csv", "ed_n8_curve.csv", "ed_n8_report.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let lines = dir.path().join("ed_n8_lines.csv");
    assert_eq!(meta(&lines, "momentum_convention").as_deref(), Some("pi-shifted"));
    let tol: f64 = meta(&lines, "window_tolerance").unwrap().parse().unwrap();
    let (mut inside, mut total) = (0.0, 0.0);
    for row in rows(&lines) {
        let (omega, weight, lo, hi) = (row[2], row[3], row[4], row[5]);
        total += weight;
        if omega >= lo - tol && omega <= hi + tol {
            inside += weight;
        }
    }
    assert!(inside / total > 0.95, "{inside} of {total}");
    let report = dir.path().join("ed_n8_report.csv");
    let cols = header(&report);
    let ratio = cols.iter().position(|c| c == "ratio").unwrap();
    let k = cols.iter().position(|c| c == "k").unwrap();
    for row in rows(&report) {
        let open = row[k] > 0.0 && (row[k] - PI).abs() > 1e-9;
        assert_eq!(row[ratio].is_finite(), open, "k = {}", row[k]);
    }
}

#[test]
fn limit_check_is_monotone() {
    let dir = TempDir::new().unwrap();
    ok(&spinon(&["limit-check"], dir.path()));
    let path = dir.path().join("limit_check.csv");
    for b in ["0.0000000000000000e0", "5.0000000000000000e-1", "1.0000000000000000e0", "2.0000000000000000e0"] {
        assert_eq!(meta(&path, &format!("beta={b} monotone")).as_deref(), Some("true"), "{b}");
    }
    assert_eq!(rows(&path).len(), 16);
}

#[test]
fn config_file_and_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "format = \"json\"\n[dispersion]\npoints = 11\nmin = -1.0\nmax = 1.0\n").unwrap();
    let env_dir = dir.path().join("env_out");
    std::fs::create_dir(&env_dir).unwrap();

    // file supplies the format and points; the flag overrides points
    let out = Command::new(env!("CARGO_BIN_EXE_spinon"))
        .args(["--config", cfg.to_str().unwrap(), "dispersion", "--points", "5"])
        .current_dir(dir.path())
        .env("SPINON_OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    ok(&out);
    let text = std::fs::read_to_string(env_dir.join("dispersion_xxx.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let data = doc["rows"].as_array().unwrap();
    assert_eq!(data.len(), 5);
    assert_eq!(data[0][0], -1.0);
    assert_eq!(doc["columns"], serde_json::json!(["beta", "e", "p"]));

    // an explicit --output-dir beats the environment
    let flag_dir = dir.path().join("flag_out");
    std::fs::create_dir(&flag_dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_spinon"))
        .args(["--output-dir", flag_dir.to_str().unwrap(), "dispersion"])
        .env("SPINON_OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    ok(&out);
    assert_eq!(rows(&flag_dir.join("dispersion_xxx.csv")).len(), 101);

    std::fs::write(&cfg, "[dispersion]\npointz = 3\n").unwrap();
    let out = spinon(&["--config", cfg.to_str().unwrap(), "dispersion"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let mut seen = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("lc{i}.csv"));
        ok(&spinon(&["limit-check", "--output", out.to_str().unwrap()], dir.path()));
        seen.push(std::fs::read(out).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
}
