//! End-to-end checks of the `arcm` binary: exit codes, artifact
//! formats, and bit-level determinism of emitted tables.

use std::fs;
use std::path::Path;
use std::process::Command;

fn arcm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arcm"))
}

fn write_fixtures(dir: &Path) -> (String, String, String, String) {
    let g0_arcs = dir.join("g0.arcs.json");
    let g0_div = dir.join("g0.div.json");
    let g1_arcs = dir.join("g1.arcs.json");
    let g1_div = dir.join("g1.div.json");
    fs::write(
        &g0_arcs,
        r#"{"arcs": [{"start": 1.2870022175865687, "end": 4.9961830895930173}]}"#,
    )
    .unwrap();
    fs::write(&g0_div, r#"{"divisor": [{"angle": 0.0, "sheet": 1}]}"#).unwrap();
    fs::write(
        &g1_arcs,
        r#"{"arcs": [{"start": 0.5, "end": 1.5}, {"start": 4.783185307179586, "end": 5.783185307179586}]}"#,
    )
    .unwrap();
    fs::write(
        &g1_div,
        r#"{"divisor": [{"angle": 0.0, "sheet": 1}, {"angle": 3.141592653589793, "sheet": 1}]}"#,
    )
    .unwrap();
    (
        g0_arcs.to_str().unwrap().into(),
        g0_div.to_str().unwrap().into(),
        g1_arcs.to_str().unwrap().into(),
        g1_div.to_str().unwrap().into(),
    )
}

#[test]
fn verify_onearc_default_passes() {
    let out = arcm()
        .args(["verify-onearc", "--r", "0.5", "--samples", "300"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!((report["runs"][0]["a"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert!((report["runs"][0]["rho"].as_f64().unwrap() - 0.8).abs() < 1e-12);
}

#[test]
fn verify_onearc_stress_r_near_one() {
    // conditioning degrades gracefully: residuals stay below 1e-7
    let out = arcm()
        .args([
            "verify-onearc",
            "--r",
            "0.999",
            "--samples",
            "500",
            "--tol-recurrence",
            "1e-7",
            "--tol-identity",
            "1e-7",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn pipeline_g0_passes_with_constant_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let (g0_arcs, g0_div, _, _) = write_fixtures(dir.path());
    let prefix = dir.path().join("out_").to_str().unwrap().to_string();
    let out = arcm()
        .args([
            "pipeline",
            "--arcs",
            &g0_arcs,
            "--divisor",
            &g0_div,
            "-N",
            "15",
            "--emit-prefix",
            &prefix,
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let alpha = fs::read_to_string(dir.path().join("out_alpha.csv")).unwrap();
    for line in alpha.lines().skip(1) {
        let re: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((re - 0.6).abs() < 1e-6, "alpha row {line}");
    }
    for artifact in [
        "out_m.csv",
        "out_nodes.csv",
        "out_atoms.csv",
        "out_schur.csv",
    ] {
        assert!(dir.path().join(artifact).exists(), "{artifact} missing");
    }
}

#[test]
fn pipeline_g1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, g1_arcs, g1_div) = write_fixtures(dir.path());
    let out = arcm()
        .args([
            "pipeline",
            "--arcs",
            &g1_arcs,
            "--divisor",
            &g1_div,
            "-N",
            "15",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"]["closure_residual"]["pass"], true);
}

#[test]
fn wrong_gap_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (_, g0_div, g1_arcs, _) = write_fixtures(dir.path());
    let out = arcm()
        .args(["pipeline", "--arcs", &g1_arcs, "--divisor", &g0_div])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("divisor has 1 points"), "stderr: {err}");
}

#[test]
fn malformed_usage_exits_2() {
    let out = arcm()
        .args(["pipeline", "--no-such-flag"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_config_and_seed_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (g0_arcs, g0_div, _, _) = write_fixtures(dir.path());
    let mut outputs = Vec::new();
    for tag in ["a_", "b_"] {
        let prefix = dir.path().join(tag).to_str().unwrap().to_string();
        let out = arcm()
            .args([
                "pipeline",
                "--arcs",
                &g0_arcs,
                "--divisor",
                &g0_div,
                "-N",
                "10",
                "--seed",
                "7",
                "--emit-prefix",
                &prefix,
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut blob = Vec::new();
        for artifact in ["m.csv", "nodes.csv", "atoms.csv", "alpha.csv", "schur.csv"] {
            blob.extend(fs::read(dir.path().join(format!("{tag}{artifact}"))).unwrap());
        }
        outputs.push(blob);
    }
    assert_eq!(
        outputs[0], outputs[1],
        "artifacts differ between identical runs"
    );
}

#[test]
fn measure_emits_node_and_atom_tables() {
    let dir = tempfile::tempdir().unwrap();
    let (g0_arcs, g0_div, _, _) = write_fixtures(dir.path());
    let nodes = dir.path().join("nodes.csv");
    let out = arcm()
        .args([
            "measure",
            "--arcs",
            &g0_arcs,
            "--divisor",
            &g0_div,
            "--level",
            "8",
            "--emit",
            nodes.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let ntext = fs::read_to_string(&nodes).unwrap();
    assert!(ntext.starts_with("angle,weight\n"));
    assert!(ntext.lines().count() > 100);
    let atext = fs::read_to_string(dir.path().join("nodes.atoms.csv")).unwrap();
    let atom_row = atext.lines().nth(1).unwrap();
    let mass: f64 = atom_row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((mass - 0.75).abs() < 1e-7);
}

#[test]
fn sweep_enumerates_divisor_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, g1_arcs, _) = write_fixtures(dir.path());
    let prefix = dir.path().join("sw_").to_str().unwrap().to_string();
    let out = arcm()
        .args([
            "sweep",
            "--arcs",
            &g1_arcs,
            "--grid",
            "2",
            "-N",
            "6",
            "--emit-prefix",
            &prefix,
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["divisors"], 16); // (2 angles x 2 sheets)^2
    let alpha = fs::read_to_string(dir.path().join("sw_alpha.csv")).unwrap();
    assert_eq!(alpha.lines().count(), 1 + 16 * 6);
}

#[test]
fn verblunsky_emits_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (g0_arcs, g0_div, _, _) = write_fixtures(dir.path());
    let csv = dir.path().join("alpha.csv");
    let svg = dir.path().join("alpha.svg");
    let out = arcm()
        .args([
            "verblunsky",
            "--arcs",
            &g0_arcs,
            "--divisor",
            &g0_div,
            "-N",
            "10",
            "--emit",
            csv.to_str().unwrap(),
            "--plot",
            svg.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(fs::read_to_string(&csv).unwrap().starts_with("n,re,im\n"));
    let svg_text = fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg") && svg_text.contains("polyline"));
}

#[test]
fn mfunc_reports_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let (g0_arcs, g0_div, _, _) = write_fixtures(dir.path());
    let out = arcm()
        .args(["mfunc", "--arcs", &g0_arcs, "--divisor", &g0_div])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["q"][0].as_f64().unwrap() + 0.625).abs() < 1e-10);
    assert!(report["value_at_zero_residual"].as_f64().unwrap() < 1e-10);
    assert!(report["value_at_infinity_residual"].as_f64().unwrap() < 1e-10);
}
