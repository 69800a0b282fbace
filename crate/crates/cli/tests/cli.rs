use std::path::Path;
use std::process::{Command, Output};

fn maxpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxpoly"))
        .args(args)
        .env_remove("MAXPOLY_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn value_after(text: &str, label: &str) -> f64 {
    text.lines()
        .find(|l| l.starts_with(label))
        .and_then(|l| l.split_whitespace().last())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {label:?} in\n{text}"))
}

#[test]
fn solve_symmetric_dodecagon() {
    let o = maxpoly(&["solve", "12", "--symmetric"]);
    assert_eq!(code(&o), 0);
    let area = value_after(&stdout(&o), "area");
    assert!((area - 0.76072986).abs() < 1e-6);
    assert!(stdout(&o).contains("KKT residual"));
}

#[test]
fn odd_and_oversized_n_are_usage_errors() {
    let o = maxpoly(&["solve", "7"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(code(&maxpoly(&["build", "26"])), 2);
    assert_eq!(code(&maxpoly(&["build", "26", "--allow-large-n"])), 0);
    assert_eq!(code(&maxpoly(&["relax", "8", "--order", "4"])), 2);
    assert_eq!(code(&maxpoly(&["frobnicate"])), 2);
}

#[test]
fn solve_json_hexadecagon() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r16.json");
    let o = maxpoly(&["solve", "16", "--symmetric", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["version"], "maxpoly-result/1");
    // The published coordinate differs from the optimum by about 6e-6.
    let x1 = doc["x"][0].as_f64().unwrap();
    assert!((x1 - 0.13204787).abs() < 1e-5, "{x1}");
    assert_eq!(std::fs::read_to_string(&out).unwrap().trim(), stdout(&o).trim());
}

#[test]
fn solve_is_byte_reproducible() {
    let a = maxpoly(&["solve", "10", "--json", "--starts", "16"]);
    let b = Command::new(env!("CARGO_BIN_EXE_maxpoly"))
        .args(["solve", "10", "--json", "--starts", "16"])
        .env("MAXPOLY_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_maxpoly"))
        .args(["solve", "10"])
        .env("MAXPOLY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

fn solve_to(dir: &Path, n: &str, name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = maxpoly(&["solve", n, "--symmetric", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    path
}

#[test]
fn certify_tetradecagon_and_tampered_copy() {
    let dir = tempfile::tempdir().unwrap();
    let path = solve_to(dir.path(), "14", "s14.json");
    let o = maxpoly(&["certify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lower = value_after(&text, "certified lower");
    let upper = value_after(&text, "analytic upper");
    assert!(lower >= 0.76753100 && (upper - 0.76893595).abs() < 1e-8);
    assert!(dir.path().join("s14.cert.json").exists());

    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["x"][2] = serde_json::json!(0.2);
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let o = maxpoly(&["certify", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 3);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["convex_verified"], false);
}

#[test]
fn certify_kite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kite.json");
    std::fs::write(
        &path,
        r#"{"version":"maxpoly-result/1","n":4,"symmetric":false,"objective":0.5,"x":[0.5],
            "max_violation":0.0,"kkt_residual":0.0,"winning_start":0,"config":{}}"#,
    )
    .unwrap();
    let out = dir.path().join("kite-cert.json");
    let o = maxpoly(&["certify", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(value_after(&stdout(&o), "certified lower") >= 0.5 - 1e-12);
    assert!(out.exists());
}

#[test]
fn certify_io_and_schema_errors() {
    assert_eq!(code(&maxpoly(&["certify", "/nonexistent/r.json"])), 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"version":"maxpoly-result/1","n":"ten"}"#).unwrap();
    let o = maxpoly(&["certify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`n`"));
}

#[test]
fn relax_reports_published_sizes() {
    let o = maxpoly(&["relax", "10", "--order", "2", "--stats"]);
    assert!(stdout(&o).contains("moment vars: 2240, moment matrix: 113"));
    let o = maxpoly(&["relax", "12", "--order", "2", "--symmetric", "--stats"]);
    assert!(stdout(&o).contains("moment vars: 680, moment matrix: 61"));
    let o = maxpoly(&["relax", "10", "--order", "1", "--stats"]);
    assert!(stdout(&o).contains("moment matrix: 15"));
}

#[test]
fn relax_exports_and_reads_moments() {
    let dir = tempfile::tempdir().unwrap();
    let sdpa = dir.path().join("oct.dat-s");
    let o = maxpoly(&["relax", "8", "--symmetric", "--sdpa", sdpa.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&sdpa).unwrap();
    let header: Vec<&str> = text.lines().filter(|l| !l.starts_with('"')).take(3).collect();
    assert_eq!(header[2].split_whitespace().next(), Some("25"));
    let side = std::fs::read_to_string(dir.path().join("oct.moments.json")).unwrap();
    assert!(side.contains("maxpoly-moments/1"));

    let zeros = vec!["0"; header[0].parse().unwrap()].join(" ");
    let mom = dir.path().join("zero.txt");
    std::fs::write(&mom, zeros).unwrap();
    let o = maxpoly(&["relax", "8", "--symmetric", "--moments", mom.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(value_after(&stdout(&o), "upper bound"), 0.0);

    assert_eq!(
        code(&maxpoly(&["relax", "8", "--sdpa", "/nonexistent/dir/x.dat-s"])),
        4
    );
}

#[test]
fn render_counts_elements() {
    let dir = tempfile::tempdir().unwrap();
    let path = solve_to(dir.path(), "12", "s12.json");
    let svg = dir.path().join("s12.svg");
    let o = maxpoly(&["render", path.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"vertex\"").count(), 12);
    assert_eq!(text.matches("class=\"chord\"").count(), 12);
}

#[test]
fn build_writes_program() {
    let o = maxpoly(&["build", "8", "--relax-closing-edge"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["version"], "maxpoly-qp/1");
    assert_eq!(doc["order_cut"], true);
    let o = maxpoly(&["build", "8", "--no-order-cut"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["order_cut"], false);
}

#[test]
fn reproduce_table() {
    let o = maxpoly(&["reproduce", "--json"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["pass"] == true && r["published"].is_f64()));

    // A single start still runs; whatever the outcome, the exit code reflects the rows.
    let o = maxpoly(&["reproduce", "--starts", "1"]);
    let failed = stdout(&o).contains("FAIL");
    assert_eq!(code(&o), if failed { 3 } else { 0 });
}
