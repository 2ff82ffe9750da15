//! End-to-end runs of spec files through the library runner: determinism,
//! in-report error capture, and the cross-checks between pipeline sections.

use cusped_core::caps::ResourceCaps;
use cusped_core::report::{report_json_without_timings, AnalysisOutcome};
use cusped_core::runner::{filter_spec, Runner};
use cusped_core::runspec::{parse_spec_toml, validate};
use std::path::Path;

fn load(name: &str) -> cusped_core::runspec::RunSpec {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    let text = std::fs::read_to_string(path).unwrap();
    let spec = parse_spec_toml(&text).unwrap();
    validate(&spec).unwrap();
    spec
}

#[test]
fn full_pipeline_produces_every_section_and_is_deterministic() {
    let spec = load("full_pipeline.toml");
    let runner = Runner::new(ResourceCaps::default());
    let (report, exit) = runner.run(&spec).unwrap();
    assert_eq!(exit, 0, "all analyses succeed");
    let kinds: Vec<&str> = report
        .analyses
        .iter()
        .map(|a| match a {
            AnalysisOutcome::Build { .. } => "build",
            AnalysisOutcome::Delta { .. } => "delta",
            AnalysisOutcome::Distortion(_) => "distortion",
            AnalysisOutcome::Perfection { .. } => "perfection",
            AnalysisOutcome::Extension(_) => "extension",
            AnalysisOutcome::Error { .. } => "error",
        })
        .collect();
    assert_eq!(
        kinds,
        vec!["build", "delta", "distortion", "perfection", "extension", "extension"]
    );
    // Identity extension is exact; scaling extension stays tame.
    for a in &report.analyses {
        if let AnalysisOutcome::Extension(e) = a {
            if e.map == "identity" {
                assert_eq!((e.lambda_fit, e.eps_fit), (1.0, 0.0));
                assert_eq!(e.roundtrip_sup, Some(0));
                assert_eq!(e.nu_fit, Some(0));
            } else {
                assert!(e.lambda_fit <= 1.5);
                assert!(e.eps_fit <= 4.0);
            }
        }
        if let AnalysisOutcome::Distortion(d) = a {
            assert_eq!(d.approx_distance.violations, 0);
            assert!(d.equivalence.b_ok && d.equivalence.a_ok);
        }
    }
    // Byte-stable reruns (timings stripped).
    let (report2, _) = runner.run(&spec).unwrap();
    assert_eq!(
        report_json_without_timings(&report),
        report_json_without_timings(&report2)
    );
}

#[test]
fn filter_keeps_only_named_analyses() {
    let spec = load("full_pipeline.toml");
    let only_delta = filter_spec(&spec, Some("delta"));
    assert_eq!(only_delta.analyses.len(), 1);
    let all = filter_spec(&spec, None);
    assert_eq!(all.analyses.len(), spec.analyses.len());
}

#[test]
fn failing_analysis_is_recorded_in_report_with_exit_two() {
    let mut spec = load("delta_tree.toml");
    // Exact mode on an oversized graph: resource error, captured in-report.
    spec.analyses = vec![cusped_core::runspec::AnalysisSpec::Delta {
        target: cusped_core::runspec::SpaceTarget::CayleyBall { radius: 5 },
        mode: cusped_core::runspec::ModeSpec::Exact,
        sample_size: None,
        seed: None,
        thin_sample_size: None,
        thin_seed: None,
    }];
    let runner = Runner::new(ResourceCaps::default());
    let (report, exit) = runner.run(&spec).unwrap();
    assert_eq!(exit, 2);
    match &report.analyses[..] {
        [AnalysisOutcome::Error { analysis, message }] => {
            assert_eq!(analysis, "delta");
            assert!(message.contains("sampled"), "suggests sampled mode: {message}");
        }
        other => panic!("expected a single error outcome, got {}", other.len()),
    }
}

#[test]
fn delta_on_tree_spec_reports_zero() {
    let spec = load("delta_tree.toml");
    let runner = Runner::new(ResourceCaps::default());
    let (report, exit) = runner.run(&spec).unwrap();
    assert_eq!(exit, 0);
    match &report.analyses[..] {
        [AnalysisOutcome::Delta { report, .. }] => {
            assert_eq!(report.delta_fourpoint, 0.0);
        }
        _ => panic!("expected one delta outcome"),
    }
}
