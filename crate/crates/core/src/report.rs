//! Run reports: a schema-versioned, canonically serialized record of one
//! run. Byte-stable across reruns with the same spec and build, except for
//! the `timings` block, which callers strip before comparing.

use crate::cusped::CuspedSummary;
use crate::distortion::{DilationReport, DistortionReport, EquivalenceCheck};
use crate::extension::CosetCorrespondence;
use crate::horoball::{ApproxDistanceReport, AsynchToSynchReport};
use crate::hyperbolicity::{DeltaReport, ThinTriangleReport};
use crate::perfection::{CenterCriterionReport, PerfectionReport};
use crate::runspec::RunSpec;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub spec: RunSpec,
    pub analyses: Vec<AnalysisOutcome>,
    pub timings: Timings,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct Timings {
    pub total_ms: f64,
    pub per_analysis_ms: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisOutcome {
    Build {
        summary: CuspedSummary,
    },
    Delta {
        report: DeltaReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        thin: Option<ThinTriangleReport>,
    },
    Distortion(Box<DistortionPipeline>),
    Perfection {
        scan: PerfectionReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        center: Option<CenterCriterionReport>,
    },
    Extension(ExtensionReport),
    Error {
        analysis: String,
        message: String,
    },
}

impl AnalysisOutcome {
    pub fn is_error(&self) -> bool {
        matches!(self, AnalysisOutcome::Error { .. })
    }
}

/// The full horospherical pipeline on one horoball truncation.
#[derive(Clone, Debug, Serialize)]
pub struct DistortionPipeline {
    pub delta: DeltaReport,
    /// Calibrated synchronization threshold (measured `D(5 delta)`).
    pub d_hat: u32,
    pub asynch: AsynchToSynchReport,
    /// `4 + 20 delta + D`.
    pub f_hat: f64,
    pub approx_distance: ApproxDistanceReport,
    pub distortion: DistortionReport,
    pub dilation: DilationReport,
    pub equivalence: EquivalenceCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub map: String,
    pub lambda_fit: f64,
    pub eps_fit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip_sup: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_fit: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functoriality_sup: Option<u32>,
    pub clamped_vertices: usize,
    pub pairs_used: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_observed: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub coset_correspondences: Vec<CosetCorrespondence>,
}

/// CSV dump of the distortion rows, for external plotting.
pub fn distortion_rows_csv(report: &DistortionReport) -> String {
    let mut out = String::from("p,q,d_t,d_y,residual\n");
    for r in &report.rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.p, r.q, r.d_t, r.d_y, r.residual));
    }
    out
}

/// CSV dump of the perfection scan rows.
pub fn perfection_rows_csv(report: &PerfectionReport) -> String {
    let mut out = String::from(
        "basepoint,radius,ball_size,mu_best,witness_0,witness_1,witness_2,mode,escaped_certified\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.basepoint,
            r.radius,
            r.ball_size,
            r.mu_best,
            r.witness[0],
            r.witness[1],
            r.witness[2],
            r.mode,
            r.escaped_certified
        ));
    }
    out
}

/// Canonical JSON form (field order fixed by the type definitions).
pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Canonical JSON with the `timings` block removed; the byte-stability
/// contract applies to this form.
pub fn report_json_without_timings(report: &RunReport) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    if let Some(obj) = value.as_object_mut() {
        obj.remove("timings");
    }
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}
