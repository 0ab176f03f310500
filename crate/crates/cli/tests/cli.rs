use std::fs;
use std::path::PathBuf;

use serde_json::Value;
use tempfile::TempDir;
use turan_cli::{exit, run};
use turan_core::optimizer::{self, SearchConfig};
use turan_core::{io, norms, Norm, QuadratureConfig};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn turan(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("turan").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn result(r: &Run) -> Value {
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    doc["result"].clone()
}

const DISK: &str = r#"{"type": "disk", "center": [0, 0], "radius": 1}"#;
const SQUARE: &str = r#"{"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;
const TRIANGLE: &str = r#"{"type": "polygon", "vertices": [[0, 0], [1, 0], [0.5, 0.8660254037844386]]}"#;

#[test]
fn analyze_square_and_triangle() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let r = turan(&["analyze", "--domain", sq.to_str().unwrap()]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let v = result(&r);
    assert_eq!(v["depth"], 1.0);
    assert_eq!(v["classification"], "III");

    let tri = write(&dir, "tri.json", TRIANGLE);
    let v = result(&turan(&["analyze", "--domain", tri.to_str().unwrap()]));
    assert_eq!(v["depth"], 0.0);
    assert_eq!(v["classification"], "II");
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let cw = write(&dir, "cw.json", r#"{"type":"polygon","vertices":[[0,0],[0,1],[1,1],[1,0]]}"#);
    let r = turan(&["analyze", "--domain", cw.to_str().unwrap()]);
    assert_eq!(r.code, exit::INVALID_INPUT);
    assert!(r.err.contains("vertices not counterclockwise"), "{}", r.err);
    assert!(r.out.is_empty());

    let bad = write(&dir, "bad.json", r#"{"type":"disk","center":[0,0]}"#);
    let r = turan(&["analyze", "--domain", bad.to_str().unwrap()]);
    assert_eq!(r.code, exit::INVALID_INPUT);
    assert!(r.err.contains("radius"), "{}", r.err);

    let r = turan(&["analyze", "--domain", "/nonexistent/domain.json"]);
    assert_eq!(r.code, exit::INVALID_INPUT);
    let r = turan(&["search", "--domain", "x.json", "--n", "1", "--q", "0.5"]);
    assert_eq!(r.code, exit::INVALID_INPUT);
    let r = turan(&["frobnicate"]);
    assert_eq!(r.code, exit::INVALID_INPUT);
    assert_eq!(turan(&["--help"]).code, exit::OK);
}

#[test]
fn oscillation_matches_library() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", DISK);
    let z = write(&dir, "z.json", r#"{"zeros": [[0,0],[0,0],[0,0],[0,0]]}"#);
    let r = turan(&["oscillation", "--domain", disk.to_str().unwrap(), "--zeros", z.to_str().unwrap()]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let m = result(&r)["oscillation"].as_f64().unwrap();
    assert!((m - 4.0).abs() < 1e-9);

    let sq = write(&dir, "sq.json", SQUARE);
    let z = write(&dir, "zs.json", r#"{"zeros": [[0.2,0.3],[0.7,0.1],[0.5,0.9]]}"#);
    let csv = dir.path().join("osc.csv");
    let r = turan(&[
        "oscillation",
        "--domain",
        sq.to_str().unwrap(),
        "--zeros",
        z.to_str().unwrap(),
        "--q",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let lib = norms::oscillation_ratio(
        &io::read_domain(&sq).unwrap(),
        &io::read_zeros(&z).unwrap(),
        Norm::Lq(3.0),
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert_eq!(result(&r), serde_json::to_value(&lib).unwrap());
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 2);
    assert!(table.starts_with("q,lq_norm_p"));
}

#[test]
fn zeros_outside_exit_3() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", DISK);
    let z = write(&dir, "z.json", r#"{"zeros": [[0.5,0],[1.5,0.25]]}"#);
    let r = turan(&["oscillation", "--domain", disk.to_str().unwrap(), "--zeros", z.to_str().unwrap()]);
    assert_eq!(r.code, exit::PRECONDITION);
    assert!(r.err.contains("[1.5, 0.25]"), "{}", r.err);
}

#[test]
fn search_is_deterministic_and_matches_library() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", DISK);
    let csv = dir.path().join("trace.csv");
    let args = [
        "search",
        "--domain",
        disk.to_str().unwrap(),
        "--n",
        "1",
        "--q",
        "inf",
        "--restarts",
        "3",
        "--max-iter",
        "300",
        "--seed",
        "11",
        "--csv",
        csv.to_str().unwrap(),
    ];
    let a = turan(&args);
    let b = turan(&args);
    assert_eq!(a.code, exit::OK, "{}", a.err);
    assert_eq!(a.out, b.out);
    let v = result(&a);
    assert!((v["best_value"].as_f64().unwrap() - 0.5).abs() < 1e-3);
    let cfg = SearchConfig {
        restarts: 3,
        max_iter: 300,
        seed: 11,
        ..SearchConfig::default()
    };
    let lib = optimizer::minimize_oscillation(&io::read_domain(&disk).unwrap(), 1, Norm::Sup, &cfg).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert!(table.starts_with("restart,seed,value,iterations,converged"));
}

#[test]
fn stamp_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", SQUARE);
    let plain: Value = serde_json::from_str(&turan(&["analyze", "--domain", sq.to_str().unwrap()]).out).unwrap();
    assert!(plain["manifest"]["timestamp"].is_null());
    let stamped: Value =
        serde_json::from_str(&turan(&["--stamp", "analyze", "--domain", sq.to_str().unwrap()]).out).unwrap();
    assert!(stamped["manifest"]["timestamp"].as_u64().unwrap() > 1_600_000_000);
    assert_eq!(plain["result"], stamped["result"]);
}

#[test]
fn verify_disk_passes() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", DISK);
    let csv = dir.path().join("checks.csv");
    let r = turan(&[
        "verify",
        "--domain",
        disk.to_str().unwrap(),
        "--n",
        "1-3",
        "--q",
        "1,2",
        "--restarts",
        "2",
        "--max-iter",
        "150",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    assert!(r.err.lines().all(|l| l.starts_with("PASS")), "{}", r.err);
    let f_line = r.err.lines().find(|l| l.contains("f_check")).unwrap();
    assert!(f_line.starts_with("PASS"));
    let v = result(&r);
    assert!(v["f_check"]["grid_min"].as_f64().unwrap() > 0.7);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
    assert!(fs::read_to_string(&csv).unwrap().lines().count() > 6);
}

#[test]
fn capacity_reports() {
    let dir = TempDir::new().unwrap();
    let hept = turan_core::geometry::catalogue::regular_polygon(7, 1.0);
    let p = write(&dir, "g7.json", &serde_json::to_string(&hept).unwrap());
    let r = turan(&["capacity", "--domain", p.to_str().unwrap(), "--m", "16", "--restarts", "2"]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let v = result(&r);
    assert!(v["exact"].as_f64().unwrap() > 1.0);
    assert!((v["regular_side"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let seg = write(&dir, "seg.json", r#"{"type":"segment","a":[-1,0],"b":[1,0]}"#);
    let v = result(&turan(&["capacity", "--domain", seg.to_str().unwrap(), "--m", "16", "--restarts", "2"]));
    assert_eq!(v["exact"], 0.5);
}
