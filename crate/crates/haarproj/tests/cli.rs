//! End-to-end tests of the command-line surface: determinism of output
//! files, exit-code contract, column schemas and method dispatch.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haarproj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let body = std::fs::read_to_string(path).unwrap();
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in body.lines() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if header.is_empty() {
            header = line.split(',').map(str::to_string).collect();
        } else {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    (header, rows)
}

fn num(row: &[String], idx: usize) -> f64 {
    row[idx].parse().unwrap()
}

#[test]
fn sample_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec![
            "sample".to_string(),
            "--ensemble".into(),
            "unitary".into(),
            "-N".into(),
            "4".into(),
            "-K".into(),
            "2".into(),
            "-R".into(),
            "2".into(),
            "--draws".into(),
            "1000".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let s1 = Command::new(env!("CARGO_BIN_EXE_haarproj"))
        .args(args(&out1))
        .status()
        .unwrap();
    assert!(s1.success());
    let s2 = Command::new(env!("CARGO_BIN_EXE_haarproj"))
        .args(args(&out2))
        .status()
        .unwrap();
    assert!(s2.success());

    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    // Identical apart from the echoed output path inside the metadata.
    let strip = |b: &[u8]| {
        String::from_utf8(b.to_vec())
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# command"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&b1), strip(&b2), "reruns must be byte-identical");

    let (header, rows) = read_rows(&out1);
    assert_eq!(header, vec!["t1", "t2"]);
    assert_eq!(rows.len(), 1000);
    assert!(rows
        .iter()
        .all(|r| (0..2).all(|i| (0.0..=1.0).contains(&num(r, i)))));

    // Metadata carries the full provenance.
    let body = std::fs::read_to_string(&out1).unwrap();
    for key in ["# command:", "# version:", "# seed: 7", "# ensemble: unitary"] {
        assert!(body.contains(key), "missing metadata {key}");
    }
}

#[test]
fn sample_with_conductance_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let status = run(&[
        "sample",
        "--ensemble",
        "unitary",
        "-N",
        "4",
        "-K",
        "2",
        "-R",
        "2",
        "--draws",
        "200",
        "--seed",
        "3",
        "--with-g",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header, vec!["t1", "t2", "g"]);
    assert!(rows.iter().all(|r| (0.0..=2.0).contains(&num(r, 2))));
}

#[test]
fn invalid_dimensions_exit_with_usage_error() {
    let out = run(&[
        "sample", "--ensemble", "unitary", "-N", "4", "-K", "2", "-R", "5", "--draws", "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("R"), "message should name the violated constraint: {stderr}");

    // Unknown ensemble.
    let out = run(&["sample", "--ensemble", "symplectic", "-N", "4", "-K", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // Analytic-evaluator constraint for the density command.
    let out = run(&["density", "--ensemble", "orthogonal", "-N", "3", "-K", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("N >= R+2"), "constraint not named: {stderr}");
}

#[test]
fn density_grid_values_and_method_dispatch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let status = run(&[
        "density",
        "--ensemble",
        "unitary",
        "-N",
        "4",
        "-K",
        "2",
        "--grid",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header, vec!["t1", "t2", "value", "method", "est_error"]);
    assert_eq!(rows.len(), 121);
    for row in &rows {
        let (t1, t2, value) = (num(row, 0), num(row, 1), num(row, 2));
        let want = if t1 + t2 < 1.0 {
            12.0 * t1 * t2
        } else {
            12.0 * (1.0 - t1) * (1.0 - t2)
        };
        assert!((value - want).abs() < 1e-12, "({t1},{t2}): {value} vs {want}");
        assert_eq!(row[3], "closed_form", "unitary 4,2 should use the closed form");
    }

    // Orthogonal N=5 has no residue route (parity): quadrature.
    let out5 = dir.path().join("d5.csv");
    let status = run(&[
        "density",
        "--ensemble",
        "orthogonal",
        "-N",
        "5",
        "-K",
        "2",
        "--grid",
        "5",
        "--out",
        out5.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (_, rows) = read_rows(&out5);
    let interior: Vec<_> = rows
        .iter()
        .filter(|r| num(r, 0) > 0.0 && num(r, 0) < 1.0 && num(r, 1) > 0.0 && num(r, 1) < 1.0)
        .collect();
    assert!(!interior.is_empty());
    assert!(
        interior.iter().all(|r| r[3] == "quadrature"),
        "orthogonal 5,2 interior should use quadrature"
    );

    // Orthogonal N=12 K=3: residue in the interior away from the line.
    let out123 = dir.path().join("d123.csv");
    let status = run(&[
        "density", "--ensemble", "orthogonal", "-N", "12", "-K", "3", "--grid", "5", "--out",
        out123.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (_, rows) = read_rows(&out123);
    for r in rows.iter().filter(|r| {
        num(r, 0) > 0.0
            && num(r, 0) < 1.0
            && num(r, 1) > 0.0
            && num(r, 1) < 1.0
            && (num(r, 0) + num(r, 1) - 1.0).abs() > 1e-3
    }) {
        assert_eq!(r[3], "residue", "expected residue at ({}, {})", r[0], r[1]);
    }
}

#[test]
fn compare_exit_codes_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let status = run(&[
        "compare",
        "--ensemble",
        "unitary",
        "-N",
        "4",
        "-K",
        "2",
        "-R",
        "2",
        "--draws",
        "200000",
        "--bins",
        "25",
        "--seed",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0), "true law should be accepted");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for key in ["chi2", "dof", "p_value", "sup_norm", "n_draws", "seed"] {
        assert!(doc["report"].get(key).is_some(), "missing report key {key}");
    }
    assert!(doc["meta"].get("command").is_some());

    // Deliberate mismatch: compare N=4 samples against the K=3 analytic law.
    let status = run(&[
        "compare",
        "--ensemble",
        "unitary",
        "-N",
        "4",
        "-K",
        "2",
        "-R",
        "2",
        "--draws",
        "200000",
        "--bins",
        "25",
        "--seed",
        "11",
        "--analytic-k",
        "3",
        "--out",
        dir.path().join("bad.json").to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(1), "wrong law should be rejected");
}

#[test]
fn conductance_columns_by_availability() {
    let dir = tempfile::tempdir().unwrap();

    // N=4, K=2 unitary: all three routes.
    let out = dir.path().join("c42.csv");
    let status = run(&[
        "conductance", "--ensemble", "unitary", "-N", "4", "-K", "2", "--grid", "21", "--draws",
        "100000", "--bins", "50", "--seed", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header, vec!["g", "p_closed", "p_convolution", "p_mc"]);
    for row in &rows {
        let g = num(row, 0);
        assert!((num(row, 1) - num(row, 2)).abs() < 1e-6, "closed vs convolution at g={g}");
        // Loose agreement only (tight bounds live in the acceptance
        // suite); skip the peak, where interpolating bin averages across
        // the derivative kink undershoots by O(|p'| h).
        if (g - 1.0).abs() > 0.05 {
            assert!((num(row, 1) - num(row, 3)).abs() < 0.1, "closed vs MC at g={g}");
        }
    }
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    assert_eq!(num(first, 1), 0.0);
    assert_eq!(num(last, 1), 0.0);
    assert!(num(first, 2).abs() < 1e-9 && num(last, 2).abs() < 1e-9);
    assert!(num(first, 3) < 0.01 && num(last, 3) < 0.01);

    // N=6, K=2 unitary: closed form unavailable, convolution + MC agree.
    let out = dir.path().join("c62.csv");
    let status = run(&[
        "conductance", "--ensemble", "unitary", "-N", "6", "-K", "2", "--grid", "21", "--draws",
        "100000", "--bins", "50", "--seed", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (header, rows) = read_rows(&out);
    assert_eq!(header, vec!["g", "p_convolution", "p_mc"]);
    for row in rows.iter().filter(|r| num(r, 0) > 0.1 && num(r, 0) < 1.9) {
        assert!(
            (num(row, 1) - num(row, 2)).abs() < 0.08,
            "convolution vs MC at g={}: {} vs {}",
            row[0],
            row[1],
            row[2]
        );
    }

    // N=8, K=4: no analytic route, Monte Carlo only.
    let out = dir.path().join("c84.csv");
    let status = run(&[
        "conductance", "--ensemble", "unitary", "-N", "8", "-K", "4", "--grid", "9", "--draws",
        "20000", "--bins", "20", "--seed", "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let (header, _) = read_rows(&out);
    assert_eq!(header, vec!["g", "p_mc"]);
}

#[test]
fn json_format_mirrors_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let status = run(&[
        "sample", "--ensemble", "orthogonal", "-N", "4", "-K", "2", "-R", "1", "--draws", "50",
        "--seed", "9", "--format", "json", "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["columns"], serde_json::json!(["t1"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 50);
    assert_eq!(doc["meta"]["ensemble"], "orthogonal");
    assert_eq!(doc["meta"]["seed"], "9");
}
