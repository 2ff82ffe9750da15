//! Subprocess tests for the `cusped` binary: exit-code contract, export
//! formats, and thread-count-independent determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_cusped")
}

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const TINY: &str = r#"
schema_version = 1

[pair]
group = { kind = "free", rank = 2 }
peripherals = [{ generators = ["a"] }]

[truncation]
cayley_radius = 2
horoball_depth = 2

[[analyses]]
kind = "delta"
target = { kind = "cusped" }
mode = "exact"
"#;

#[test]
fn good_run_exits_zero_and_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "tiny.toml", TINY);
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
    assert!(report.contains("\"delta_fourpoint\""));
}

#[test]
fn spec_schema_violation_exits_one_listing_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(
        tmp.path(),
        "bad.toml",
        &TINY.replace("mode = \"exact\"", "mode = \"sampled\"\nsample_size = 10"),
    );
    let out = run(&["run", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("seed"), "violations listed: {err}");
}

#[test]
fn unknown_top_level_key_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "bad2.toml", &format!("{TINY}\nnope = 1\n"));
    let out = run(&["run", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analysis_error_exits_two_but_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(
        tmp.path(),
        "big.toml",
        &TINY.replace(
            "target = { kind = \"cusped\" }",
            "target = { kind = \"cayley_ball\", radius = 5 }",
        ),
    );
    let out = run(&["run", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"kind\": \"error\""));
}

#[test]
fn unwritable_output_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "tiny.toml", TINY);
    let blocked = tmp.path().join("blocked");
    std::fs::write(&blocked, b"file, not dir").unwrap();
    let out = run(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        blocked.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn build_prints_summary_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "tiny.toml", TINY);
    let out = run(&["build", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let summary: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(summary["cayley_vertices"], 17);
    assert!(summary["cosets"].as_u64().unwrap() > 0);
}

#[test]
fn export_formats_and_reexport_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "tiny.toml", TINY);
    let out1 = tmp.path().join("e1");
    let out2 = tmp.path().join("e2");
    for (dir, fmt) in [(&out1, "dot"), (&out2, "dot")] {
        let out = run(&[
            "export",
            "--spec",
            spec.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--format",
            fmt,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let d1 = std::fs::read(out1.join("cusped.dot")).unwrap();
    let d2 = std::fs::read(out2.join("cusped.dot")).unwrap();
    assert_eq!(d1, d2);

    let csv_dir = tmp.path().join("csv");
    let out = run(&[
        "export",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        csv_dir.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let vertices = std::fs::read_to_string(csv_dir.join("cusped.vertices.csv")).unwrap();
    let edges = std::fs::read_to_string(csv_dir.join("cusped.edges.csv")).unwrap();
    assert!(vertices.starts_with("index,kind,element,depth\n"));
    assert!(edges.starts_with("u,v\n"));
    assert!(edges.ends_with('\n'));
    // Edge count in the file matches the build summary.
    let build = run(&["build", "--spec", spec.to_str().unwrap()]);
    let summary: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&build.stdout)).unwrap();
    assert_eq!(
        edges.lines().count() - 1,
        summary["total_edges"].as_u64().unwrap() as usize
    );
}

#[test]
fn horoball_export_has_one_node_line_per_vertex() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "tiny.toml", TINY);
    let dir = tmp.path().join("h");
    let out = run(&[
        "export",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
        "--format",
        "dot",
        "--horoball-peripheral",
        "0",
        "--width-radius",
        "3",
        "--max-depth",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dot = std::fs::read_to_string(dir.join("horoball0.dot")).unwrap();
    // 7 width elements x 3 levels.
    assert_eq!(dot.matches(" [label=").count(), 21);
}

#[test]
fn csv_report_format_dumps_row_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let spec = specs_dir().join("full_pipeline.toml");
    let out = run(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // Analyses: 0 build, 1 delta, 2 distortion, 3 perfection, 4/5 extend.
    let d = std::fs::read_to_string(out_dir.join("distortion_2.csv")).unwrap();
    assert!(d.starts_with("p,q,d_t,d_y,residual\n"));
    assert!(d.lines().count() > 10);
    let p = std::fs::read_to_string(out_dir.join("perfection_3.csv")).unwrap();
    assert!(p.starts_with("basepoint,radius,ball_size,mu_best,"));
    // Without --out the csv format is an input error.
    let out = run(&["run", "--spec", spec.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn subcommand_filters_run_only_that_analysis() {
    let spec = specs_dir().join("full_pipeline.toml");
    let out = run(&["delta", "--spec", spec.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let kinds: Vec<&str> = report["analyses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, vec!["build", "delta"]);
}
