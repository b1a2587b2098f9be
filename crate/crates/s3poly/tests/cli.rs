//! End-to-end tests of the command-line interface: exit codes, file
//! schemas, determinism, and round-trips, run against the compiled
//! binary.

use std::path::Path;
use std::process::{Command, Output};

use s3poly::cli::{BraidDoc, FlowDoc, SolveDoc};
use s3poly::moduli::{closure_residual, HolonomyTuple};

fn s3poly(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s3poly"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn read_solve(path: &Path) -> SolveDoc {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn tuple_of(doc: &SolveDoc) -> HolonomyTuple {
    HolonomyTuple::from_elements(doc.tuple.iter().map(|q| q.to_group()).collect()).unwrap()
}

const SQUARE: &str = "1.5707963,1.5707963,1.5707963,1.5707963";

#[test]
fn solve_writes_valid_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "solve", "--sides", SQUARE, "--seed", "7", "--out", "sq.json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_solve(&dir.path().join("sq.json"));
    assert_eq!(doc.schema_version, 1);
    assert_eq!(doc.n, 4);
    assert_eq!(doc.vertices.len(), 5);
    assert!(doc.closure_residual < 1e-10);
    // Re-load oracle: residual recomputed from the written tuple.
    let t = tuple_of(&doc);
    assert!(closure_residual(&t) < 1e-10);
    // First and last vertices coincide on a closed polygon.
    let first = doc.vertices.first().unwrap().to_group();
    let last = doc.vertices.last().unwrap().to_group();
    assert!(first.dist(&last) < 1e-9);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let out = s3poly(
            &["solve", "--sides", SQUARE, "--seed", "123", "--out", name],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn bad_configs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Too few sides.
    let out = s3poly(&["solve", "--sides", "1.0,1.0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("kind="), "stderr: {err}");
    // Side length out of (0, pi).
    let out = s3poly(&["solve", "--sides", "1.0,1.0,3.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad_radius"));
}

#[test]
fn infeasible_sides_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(&["solve", "--sides", "0.1,0.1,3.0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_solution"));
}

#[test]
fn flow_trajectory_closes_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "flow",
            "--sides",
            SQUARE,
            "--seed",
            "5",
            "--j",
            "2",
            "--samples",
            "100",
            "--out",
            "flow.json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: FlowDoc =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("flow.json")).unwrap())
            .unwrap();
    assert_eq!(doc.samples.len(), 100);
    // Full turn: last record equals the first within 1e-7.
    let first = &doc.samples[0];
    let last = &doc.samples[99];
    assert!((last.angle - std::f64::consts::TAU).abs() < 1e-12);
    for (a, b) in first.vertices.iter().zip(&last.vertices) {
        assert!(a.to_group().dist(&b.to_group()) < 1e-7);
    }
    // Conserved-quantity drift stays at rounding level throughout.
    for s in &doc.samples {
        assert!(s.drift < 1e-9);
    }
}

#[test]
fn flow_single_sample_is_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "flow",
            "--sides",
            SQUARE,
            "--seed",
            "5",
            "--j",
            "2",
            "--samples",
            "1",
            "--out",
            "one.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: FlowDoc =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("one.json")).unwrap())
            .unwrap();
    assert_eq!(doc.samples.len(), 1);
    assert_eq!(doc.samples[0].angle, 0.0);
}

#[test]
fn degenerate_diagonal_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // j = n: the full prefix of a closed tuple is the identity, a
    // degenerate diagonal.
    let out = s3poly(
        &["flow", "--sides", SQUARE, "--j", "4", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate_diagonal"));
}

#[test]
fn braid_round_trip_and_class_restoration() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "solve",
            "--sides",
            SQUARE,
            "--seed",
            "11",
            "--out",
            "base.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let base = read_solve(&dir.path().join("base.json"));

    // R1 R'1 is the identity word.
    let out = s3poly(
        &[
            "braid", "--sides", SQUARE, "--seed", "11", "--word", "R1 R'1", "--out", "id.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: BraidDoc =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("id.json")).unwrap())
            .unwrap();
    for (a, b) in doc.tuple.iter().zip(&base.tuple) {
        assert!(a.to_group().dist(&b.to_group()) < 1e-12);
    }

    // A13 permutes nothing: side lengths are restored.
    let out = s3poly(
        &[
            "braid", "--sides", SQUARE, "--seed", "11", "--word", "A13", "--out", "a13.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: BraidDoc =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a13.json")).unwrap())
            .unwrap();
    for (side, expected) in doc.report.sides.iter().zip(&base.sides) {
        assert!((side - expected).abs() < 1e-10);
    }
    assert!(doc.report.closure_residual < 1e-9);
}

#[test]
fn braid_parse_error_reports_token() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "braid", "--sides", SQUARE, "--word", "R1 Q9", "--out", "x.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Q9"), "stderr: {err}");
    assert!(err.contains("byte 3"), "stderr: {err}");
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &["verify", "--suite", "algebra", "--out", "report.json"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
    assert!(dir.path().join("report.json").exists());

    // An unachievable tolerance must fail honestly with exit 4.
    let out = s3poly(
        &[
            "verify", "--suite", "bracket", "--tol", "1e-30", "--out", "r2.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    // Unknown suite name is a config error.
    let out = s3poly(&["verify", "--suite", "nonsense"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    // CSV report variant.
    let out = s3poly(
        &[
            "verify",
            "--suite",
            "algebra",
            "--format",
            "csv",
            "--out",
            "report.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "name,criterion,measured,threshold,sense,passed,trials"
    );
    assert!(csv.lines().count() > 5);
}

#[test]
fn export_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = s3poly(
        &[
            "solve", "--sides", SQUARE, "--seed", "7", "--out", "sq.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = s3poly(
        &[
            "export", "--input", "sq.json", "--out", "sq.csv", "--format", "csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("sq.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("n,seed,closure_residual,g1_w"));
    assert_eq!(csv.lines().count(), 2);

    // CSV output directly from the flow command matches the export of
    // its JSON document.
    let out = s3poly(
        &[
            "flow",
            "--sides",
            SQUARE,
            "--seed",
            "7",
            "--j",
            "2",
            "--samples",
            "5",
            "--out",
            "flow.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = s3poly(
        &[
            "export",
            "--input",
            "flow.json",
            "--out",
            "flow.csv",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("flow.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("angle,v1_w"));
    assert_eq!(csv.lines().count(), 6);

    // Verify reports export too.
    let out = s3poly(
        &["verify", "--suite", "braid", "--out", "vr.json"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = s3poly(
        &[
            "export", "--input", "vr.json", "--out", "vr.csv", "--format", "csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("vr.csv")).unwrap();
    assert!(csv.starts_with("name,criterion,measured"));

    // A document without a command field is rejected.
    std::fs::write(dir.path().join("junk.json"), "{\"x\": 1}").unwrap();
    let out = s3poly(
        &[
            "export",
            "--input",
            "junk.json",
            "--out",
            "j.csv",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"n": 4, "side_lengths": [1.5707963, 1.5707963, 1.5707963, 1.5707963],
            "seed": 7, "tolerance": 1e-10, "output_path": "from-config.json"}"#,
    )
    .unwrap();
    let out = s3poly(&["solve", "--config", "run.json"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_solve(&dir.path().join("from-config.json"));
    assert_eq!(doc.seed, 7);
    assert!(doc.closure_residual < 1e-10);
}
