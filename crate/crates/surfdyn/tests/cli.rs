use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use surfdyn::cli::{parse_tolerance, run, EXIT_GALLERY, EXIT_GENERICITY, EXIT_INPUT, EXIT_OK, EXIT_TRUNCATED};
use surfdyn::gallery::{feps_file, Entry};
use surfdyn::report::ReportJson;
use surfdyn::MapFile;
use surfdyn_core::number::{pow10, rat, ratio};
use surfdyn_core::Rational;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn surfdyn(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("surfdyn").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &TempDir, name: &str, file: &MapFile) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, file.to_json()).unwrap();
    path
}

fn entry_file(dir: &TempDir, entry: Entry) -> PathBuf {
    write(dir, &format!("{entry}.json"), &entry.map_file())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_ex41_json() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Ex41);
    let r = surfdyn(&["analyze", s(&path), "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let j: ReportJson = serde_json::from_str(&r.out).unwrap();
    assert_eq!(j.lambda_exact.as_deref(), Some("2"));
    assert_eq!(j.deg_top, 3);
    assert!(!j.is_regular_geometric);
    assert_eq!(j.stability_verified_up_to, 5);
    // the serialized form round-trips
    let again: ReportJson = serde_json::from_str(&j.to_json()).unwrap();
    assert_eq!(again, j);
    assert!(r.out.contains("\"thm13_consistent\""));
}

#[test]
fn analyze_power_map_notes_the_anomaly() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Power(2));
    let r = surfdyn(&["analyze", s(&path)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("regular (base locus)"));
    assert!(r.out.lines().any(|l| l.starts_with("note")), "{}", r.out);
    assert!(r.out.is_ascii());
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Ex41);
    let a = surfdyn(&["analyze", s(&path), "--seed", "9"]);
    let b = surfdyn(&["analyze", s(&path), "--seed", "9"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
}

#[test]
fn malformed_input_exits_1_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", &MapFile::plane(["x*z + y^2", "y*z + (x^2", "x^2"]));
    let r = surfdyn(&["analyze", s(&bad)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("position"), "{}", r.err);

    let r = surfdyn(&["analyze", s(&dir.path().join("missing.json"))]);
    assert_eq!(r.code, EXIT_INPUT);

    fs::write(dir.path().join("junk.json"), "{\"surface\": \"P3\", \"components\": []}").unwrap();
    let r = surfdyn(&["fiber-count", s(&dir.path().join("junk.json"))]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("P3"));
}

#[test]
fn iterate_writes_csv() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Ex41);
    let r = surfdyn(&["iterate", s(&path), "--n", "5"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "n,d11,d12,d21,d22,lambda_upper_n");
    let degrees: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(degrees, ["2", "4", "8", "16", "32"]);

    let out = dir.path().join("seq.csv");
    let r = surfdyn(&["iterate", s(&path), "--n", "2", "--csv", s(&out)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn iterate_identity_and_zero_iterates() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", &MapFile::plane(["x", "y", "z"]));
    let r = surfdyn(&["iterate", s(&id), "--n", "4"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.lines().skip(1).all(|l| l.split(',').nth(1) == Some("1")));
    assert_eq!(surfdyn(&["iterate", s(&id), "--n", "0"]).code, EXIT_INPUT);
}

#[test]
fn budget_truncation_exits_3_with_partial_report() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Ex41);
    let r = surfdyn(&["analyze", s(&path), "--n", "5", "--budget", "10", "--json"]);
    assert_eq!(r.code, EXIT_TRUNCATED, "{}", r.err);
    let j: ReportJson = serde_json::from_str(&r.out).unwrap();
    assert!(j.truncated.is_some());
    assert_eq!(j.degree_sequence.len(), 3);
}

#[test]
fn fiber_count_and_genericity_failure() {
    let dir = TempDir::new().unwrap();
    let ex42 = entry_file(&dir, Entry::Ex42);
    let ex44 = entry_file(&dir, Entry::Ex44);
    assert_eq!(surfdyn(&["fiber-count", s(&ex42)]).out.trim(), "4");
    assert_eq!(surfdyn(&["fiber-count", s(&ex44)]).out.trim(), "8");
    // all random entries forced to zero
    let r = surfdyn(&["fiber-count", s(&ex42), "--height", "0"]);
    assert_eq!(r.code, EXIT_GENERICITY, "{}", r.err);
    assert_eq!(surfdyn(&["fiber-count", s(&ex42), "--trials", "2"]).code, EXIT_INPUT);
}

#[test]
fn gallery_exit_codes() {
    let r = surfdyn(&["gallery", "--name", "power-d", "--d", "2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    assert!(r.out.lines().all(|l| l.starts_with("PASS")));
    assert!(r.out.contains("PASS power-2 perron vector: expected (1, 0) cone-certified"));

    let r = surfdyn(&["gallery", "--name", "ex44", "--json"]);
    assert_eq!(r.code, EXIT_GALLERY);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    let pass = |label: &str| checks.iter().find(|c| c["label"] == label).unwrap()["pass"].as_bool().unwrap();
    assert!(pass("pullback matrix") && pass("topological degree") && pass("entropy bound"));
    assert!(!pass("dynamical degree"));

    assert_eq!(surfdyn(&["gallery", "--name", "ex99"]).code, EXIT_INPUT);
    let r = surfdyn(&["gallery", "--name", "feps", "--eps", "-1/2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
}

#[test]
fn family_scan_lengths() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "feps.json", &feps_file().with_parameter("eps", &rat(1)));
    let r = surfdyn(&["family-scan", s(&path), "--param", "eps", "--values", "1,2,3,1/2"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let rows: Vec<&str> = r.out.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|l| l.split(',').nth(1) == Some("16")), "{}", r.out);
    assert!(r.out.contains("length constant: true, matrix constant: true"));

    assert_eq!(surfdyn(&["family-scan", s(&path), "--values", ""]).code, EXIT_INPUT);
    assert_eq!(surfdyn(&["family-scan", s(&path), "--values", "1,x"]).code, EXIT_INPUT);
}

#[test]
fn invariance_check_families() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "feps2.json", &feps_file().with_parameter("eps", &rat(2)));
    let r = surfdyn(&["invariance-check", s(&path), "--family", "reciprocal", "--values", "1,2,-1,0"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let rows: Vec<&str> = r.out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[..3].iter().all(|l| l.split(',').nth(1) == Some("false")));
    // K = 0 is singular
    assert_eq!(rows[3].split(',').nth(1), Some("-"));

    let r = surfdyn(&["invariance-check", s(&path), "--family", "swap"]);
    assert_eq!(r.out.lines().nth(1).unwrap(), "A(w) = w,false,");

    let r = surfdyn(&["invariance-check", s(&path), "--family", "scaling", "--values", "1,3"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 3);

    assert_eq!(surfdyn(&["invariance-check", s(&path), "--family", "reciprocal"]).code, EXIT_INPUT);
}

#[test]
fn spectral_command() {
    let r = surfdyn(&["spectral", "--matrix", "[[2,2],[2,2]]", "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["spectral_radius_exact"], "4");
    assert_eq!(v["perron_exact"], serde_json::json!(["1", "1"]));
    assert_eq!(v["krein_rutman"], true);

    let dir = TempDir::new().unwrap();
    let lattice = dir.path().join("orthant.json");
    fs::write(&lattice, r#"{"rank": 3, "form": [[1,0,0],[0,1,0],[0,0,1]], "nef_generators": [[1,0,0],[0,1,0],[0,0,1]], "ample": [1,1,1]}"#).unwrap();
    let r = surfdyn(&["spectral", "--lattice", s(&lattice), "--matrix", "[[1,1,0],[1,0,0],[0,0,1]]"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let line = r.out.lines().find(|l| l.starts_with("spectral radius")).unwrap();
    let ends: Vec<f64> = line.split(['[', ']', ',']).filter_map(|t| t.trim().parse().ok()).collect();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(ends.len() == 2 && ends[0] <= phi && phi <= ends[1] && ends[1] - ends[0] <= 1e-12, "{line}");

    assert_eq!(surfdyn(&["spectral", "--matrix", "[[1,2,3]]"]).code, EXIT_INPUT);
}

#[test]
fn help_and_version() {
    assert_eq!(surfdyn(&["--help"]).code, EXIT_OK);
    assert_eq!(surfdyn(&["--version"]).code, EXIT_OK);
    assert_eq!(surfdyn(&[]).code, EXIT_INPUT);
    assert_eq!(surfdyn(&["analyze"]).code, EXIT_INPUT);
}

#[test]
fn tolerance_syntax() {
    let tiny = Rational::new(1.into(), pow10(12));
    assert_eq!(parse_tolerance("1e-12").unwrap(), tiny);
    assert_eq!(parse_tolerance("0.000000000001").unwrap(), tiny);
    assert_eq!(parse_tolerance("2.5E1").unwrap(), rat(25));
    assert_eq!(parse_tolerance("1/3").unwrap(), ratio(1, 3));
    assert!(parse_tolerance("0").is_err());
    assert!(parse_tolerance("-1e-3").is_err());
    assert!(parse_tolerance("1e").is_err());
}

#[test]
fn binary_honours_seed_variable() {
    let dir = TempDir::new().unwrap();
    let path = entry_file(&dir, Entry::Ex41);
    let bin = env!("CARGO_BIN_EXE_surfdyn");
    let output = |seed: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(bin);
        cmd.arg("analyze").arg(&path).args(args);
        match seed {
            Some(v) => cmd.env("SURFDYN_SEED", v),
            None => cmd.env_remove("SURFDYN_SEED"),
        };
        cmd.output().unwrap()
    };
    let env = output(Some("17"), &["--json"]);
    let flag = output(None, &["--json", "--seed", "17"]);
    assert!(env.status.success());
    assert_eq!(env.stdout, flag.stdout);

    let bad = Command::new(bin).args(["iterate", "nowhere.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(!bad.stderr.is_empty() && bad.stdout.is_empty());
}
