//! Behavioral tests of the command-line interface: exit-code taxonomy,
//! file outputs, and input validation.

mod fixtures;

use shskit::curve::ProfileCurve;
use shskit::homotopy::StableHomotopy;
use shskit::shs::ShsPair;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shskit"))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) {
    std::fs::write(path, serde_json::to_string(value).unwrap()).unwrap();
}

/// The growing-stabilizer homotopy `(h_st, (1 + t) h_st)`, which has
/// length exactly 1.
fn unit_length_homotopy() -> StableHomotopy {
    let samples = (0..9)
        .map(|j| {
            let t = j as f64 / 8.0;
            let h = ProfileCurve::standard(1.0, (0.1, 0.9));
            let g = ProfileCurve::standard(1.0 + t, (0.1, 0.9));
            (t, ShsPair::new(h, g).unwrap())
        })
        .collect();
    StableHomotopy::from_samples(samples).unwrap()
}

#[test]
fn obstruction_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    write_json(&path, &unit_length_homotopy());
    let out = bin()
        .args(["cobordism", "--homotopy", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("obstruction"), "{err}");
}

#[test]
fn numerical_failure_exits_with_code_three() {
    // Synthesis is known to fail on a nearly-straight curve with wide
    // germs: the correction basis is too ill-conditioned.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    write_json(&path, &fixtures::straight_germ_curve(0.45));
    let out = bin()
        .args(["stabilize", "--curve", path.to_str().unwrap(), "--eps", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn malformed_json_exits_with_code_four_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"interval\": [0, ").unwrap();
    let out = bin()
        .args(["verify", "--pair", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn stabilize_output_feeds_verify() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.json");
    write_json(&curve, &fixtures::random_wiggle_curve(&mut fixtures::rng(42)));
    let out = bin()
        .args(["stabilize", "--curve", curve.to_str().unwrap(), "--eps", "0.08"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, &out.stdout).unwrap();
    let out = bin()
        .args(["verify", "--pair", pair.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], serde_json::Value::Bool(true));
}

#[test]
fn length_reports_the_reference_constants() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    write_json(&path, &unit_length_homotopy());
    let out = bin()
        .args(["length", "--homotopy", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["length"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((v["a_max"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(v["b_max"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn cobordism_csv_export_has_header_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = dir.path().join("gamma.json");
    write_json(
        &gamma,
        &fixtures::random_scaled_homotopy(&mut fixtures::rng(7), (0.1, 0.9), 0.05),
    );
    let csv = dir.path().join("density.csv");
    let out = bin()
        .args([
            "cobordism",
            "--homotopy",
            gamma.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# f_slope="));
    assert_eq!(lines.next().unwrap(), "t,r,density");
    assert_eq!(lines.count(), 65 * 257);
    // Every density entry in the CSV is positive.
    for line in text.lines().skip(2) {
        let d: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(d > 0.0, "{line}");
    }
}

#[test]
fn render_emits_styled_paths_and_axes() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = dir.path().join("c1.json");
    let c2 = dir.path().join("c2.json");
    write_json(&c1, &ProfileCurve::standard(1.0, (0.0, 1.0)));
    write_json(&c2, &fixtures::graph_curve(0.2, 0.5, &[0.1]));
    let svg_path = dir.path().join("fig.svg");
    let out = bin()
        .args([
            "render",
            "--curve",
            c1.to_str().unwrap(),
            "--curve",
            c2.to_str().unwrap(),
            "--out",
            svg_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert_eq!(svg.matches("<path").count(), 2);
    assert!(svg.contains("stroke-dasharray"), "first curve dashed");
    assert!(svg.contains("stroke-width=\"3\""), "second curve bold");
    assert!(svg.trim_end().ends_with("</svg>"));

    // No curves: valid SVG with the axes only.
    let out = bin().arg("render").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<line").count(), 2);
    assert_eq!(svg.matches("<path").count(), 0);
}

#[test]
fn catalog_list_and_error_handling() {
    let out = bin().args(["catalog", "--list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(names.contains(&"standard_contact".to_string()));

    let out = bin().args(["catalog", "--name", "no_such_pair"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args([
            "catalog",
            "--name",
            "{\"name\":\"s3_canonical\",\"s0\":\"-\",\"s1\":\"+\",\"w\":1}",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let pair: ShsPair = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(pair.interval(), (0.0, 1.0));
}

#[test]
fn classify_against_prints_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let std_pair = {
        let h = ProfileCurve::standard(1.0, (0.0, 1.0));
        ShsPair::new(h.clone(), h).unwrap()
    };
    let scaled = {
        let h = ProfileCurve::standard(2.0, (0.0, 1.0));
        let g = ProfileCurve::standard(1.5, (0.0, 1.0));
        ShsPair::new(h, g).unwrap()
    };
    write_json(&a, &std_pair);
    write_json(&b, &scaled);
    let out = bin()
        .args([
            "classify",
            "--pair",
            a.to_str().unwrap(),
            "--manifold",
            "s3",
            "--against",
            b.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["homotopic"], serde_json::Value::Bool(true));
    assert_eq!(v["witness"]["samples"].as_array().unwrap().len(), 33);
}

#[test]
fn invalid_thread_cap_is_rejected() {
    let out = bin()
        .args(["catalog", "--list"])
        .env("SHSKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["catalog", "--list"])
        .env("SHSKIT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
