//! Run specifications: the file format driving builds and analyses.
//!
//! JSON or TOML by extension. The schema is strict: unknown fields are
//! rejected, and sampled modes must carry explicit seeds — reports are
//! reproducible artifacts, so nothing is defaulted silently.

use crate::error::{Error, Result};
use crate::groups::PairDescriptor;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub schema_version: u32,
    pub pair: PairDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analyses: Vec<AnalysisSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub cayley_radius: u32,
    pub horoball_depth: u32,
    #[serde(default)]
    pub margin: u32,
    /// Raise the ambient ball-radius safety cap (default 12).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_cap: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceTarget {
    /// The cusped truncation of the pair (needs `[truncation]`).
    Cusped,
    /// The plain Cayley ball of the ambient group.
    CayleyBall { radius: u32 },
    /// A standalone horoball over one peripheral.
    Horoball {
        peripheral: usize,
        width_radius: u32,
        max_depth: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Exact,
    Sampled,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnalysisSpec {
    Delta {
        target: SpaceTarget,
        mode: ModeSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sample_size: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        /// Also compute the thin-triangle constant over this many triangles.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        thin_sample_size: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        thin_seed: Option<u64>,
    },
    Distortion {
        peripheral: usize,
        width_radius: u32,
        max_depth: u32,
        sample_size: usize,
        seed: u64,
        /// Synchronization threshold D; omitted = calibrate from the
        /// asynch-to-synch sample.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d_threshold: Option<u32>,
        #[serde(default = "default_a_list")]
        a_list: Vec<f64>,
        delta_mode: ModeSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_sample_size: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_seed: Option<u64>,
    },
    Perfection {
        target: SpaceTarget,
        /// Basepoint words in the ambient group (Cayley vertices).
        basepoints: Vec<String>,
        radii: Vec<u32>,
        mode: ModeSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sample_size: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center_horizon: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center_l_max: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center_sample: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center_seed: Option<u64>,
    },
    Extend {
        map: MapDescriptor,
        target: SpaceTarget,
        pairs: usize,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group_radius: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertex_sample: Option<usize>,
    },
}

fn default_a_list() -> Vec<f64> {
    vec![1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDescriptor {
    Identity,
    /// Endomorphism of the ambient group by generator images (words).
    GeneratorImages { images: Vec<String> },
    /// `x -> x^factor` on the peripheral base of a horoball target.
    PeripheralScaling { factor: u64 },
}

/// Parse a spec file; format chosen by extension (`.json` / `.toml`).
pub fn parse_spec(path: &Path) -> Result<RunSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let spec = match ext.as_str() {
        "json" => parse_spec_json(&text)?,
        "toml" => parse_spec_toml(&text)?,
        other => {
            return Err(Error::Input(format!(
                "unknown spec extension '{other}' (expected .json or .toml)"
            )))
        }
    };
    validate(&spec)?;
    Ok(spec)
}

/// Parse JSON spec text (schema errors only; no validation pass).
pub fn parse_spec_json(text: &str) -> Result<RunSpec> {
    serde_json::from_str(text).map_err(|e| Error::SpecValidation(vec![e.to_string()]))
}

/// Parse TOML spec text (schema errors only; no validation pass).
pub fn parse_spec_toml(text: &str) -> Result<RunSpec> {
    toml::from_str(text).map_err(|e| Error::SpecValidation(vec![e.to_string()]))
}

/// Canonical printed form (JSON, two-space indent, fixed field order).
pub fn print_spec(spec: &RunSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// Collect every validation violation rather than stopping at the first.
pub fn validate(spec: &RunSpec) -> Result<()> {
    let mut errs = Vec::new();
    if spec.schema_version != SCHEMA_VERSION {
        errs.push(format!(
            "schema_version {} unsupported (expected {SCHEMA_VERSION})",
            spec.schema_version
        ));
    }
    for (i, a) in spec.analyses.iter().enumerate() {
        let ctx = |field: &str| format!("analyses[{i}]: {field}");
        match a {
            AnalysisSpec::Delta { target, mode, sample_size, seed, thin_sample_size, thin_seed } => {
                if *mode == ModeSpec::Sampled {
                    if sample_size.is_none() {
                        errs.push(ctx("sampled mode requires sample_size"));
                    }
                    if seed.is_none() {
                        errs.push(ctx("sampled mode requires seed"));
                    }
                }
                if *mode == ModeSpec::Auto {
                    errs.push(ctx("delta mode must be exact or sampled"));
                }
                if thin_sample_size.is_some() && thin_seed.is_none() {
                    errs.push(ctx("thin_sample_size requires thin_seed"));
                }
                check_target(target, spec, &mut errs, i);
            }
            AnalysisSpec::Distortion {
                peripheral,
                delta_mode,
                delta_sample_size,
                delta_seed,
                sample_size,
                ..
            } => {
                if *peripheral >= spec.pair.peripherals.len() {
                    errs.push(ctx("peripheral index out of range"));
                }
                if *sample_size == 0 {
                    errs.push(ctx("sample_size must be positive"));
                }
                if *delta_mode == ModeSpec::Sampled {
                    if delta_sample_size.is_none() {
                        errs.push(ctx("sampled delta requires delta_sample_size"));
                    }
                    if delta_seed.is_none() {
                        errs.push(ctx("sampled delta requires delta_seed"));
                    }
                }
                if *delta_mode == ModeSpec::Auto {
                    errs.push(ctx("delta_mode must be exact or sampled"));
                }
            }
            AnalysisSpec::Perfection { target, basepoints, radii, mode, sample_size, seed, center_sample, center_seed, .. } => {
                if basepoints.is_empty() {
                    errs.push(ctx("needs at least one basepoint"));
                }
                if radii.is_empty() {
                    errs.push(ctx("needs at least one radius"));
                }
                if *mode != ModeSpec::Exact && (sample_size.is_none() || seed.is_none()) {
                    errs.push(ctx("non-exact mode requires sample_size and seed"));
                }
                if center_sample.is_some() && center_seed.is_none() {
                    errs.push(ctx("center_sample requires center_seed"));
                }
                check_target(target, spec, &mut errs, i);
            }
            AnalysisSpec::Extend { map, target, pairs, .. } => {
                if *pairs == 0 {
                    errs.push(ctx("pairs must be positive"));
                }
                match (map, target) {
                    (MapDescriptor::PeripheralScaling { factor }, SpaceTarget::Horoball { .. }) => {
                        if *factor == 0 {
                            errs.push(ctx("scaling factor must be positive"));
                        }
                    }
                    (MapDescriptor::PeripheralScaling { .. }, _) => {
                        errs.push(ctx("peripheral_scaling requires a horoball target"));
                    }
                    _ => {}
                }
                check_target(target, spec, &mut errs, i);
            }
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(Error::SpecValidation(errs))
    }
}

fn check_target(target: &SpaceTarget, spec: &RunSpec, errs: &mut Vec<String>, i: usize) {
    match target {
        SpaceTarget::Cusped => {
            if spec.truncation.is_none() {
                errs.push(format!(
                    "analyses[{i}]: cusped target needs a [truncation] section"
                ));
            }
        }
        SpaceTarget::Horoball { peripheral, .. } => {
            if *peripheral >= spec.pair.peripherals.len() {
                errs.push(format!("analyses[{i}]: peripheral index out of range"));
            }
        }
        SpaceTarget::CayleyBall { .. } => {}
    }
}
