//! Orchestration: build the spaces a spec names, run its analyses in order,
//! and assemble the report. One failed analysis is recorded in-report and
//! turns the exit code to 2; the rest still run.

use crate::caps::ResourceCaps;
use crate::cusped::{CuspedParams, CuspedTruncation};
use crate::distortion;
use crate::error::{Error, Result};
use crate::extension::{self, GroupHom, PairMap, PairMapKind, VertexMap};
use crate::groups::{GroupElement, GroupModel, GroupPair};
use crate::horoball::{HoroballParams, HoroballTruncation, SampleSpec};
use crate::hyperbolicity::{self, DeltaMode, DeltaParams};
use crate::perfection::{self, EquilateralParams, ScanMode};
use crate::report::{
    AnalysisOutcome, DistortionPipeline, ExtensionReport, RunReport, Timings,
};
use crate::runspec::{
    AnalysisSpec, MapDescriptor, ModeSpec, RunSpec, SpaceTarget,
};
use crate::sampling;
use crate::space::SpaceGraph;
use std::time::Instant;

pub struct Runner {
    caps: ResourceCaps,
}

impl Runner {
    pub fn new(caps: ResourceCaps) -> Self {
        Runner { caps }
    }

    /// Execute the spec. Exit code: 0 all analyses succeeded, 2 otherwise.
    pub fn run(&self, spec: &RunSpec) -> Result<(RunReport, i32)> {
        let start = Instant::now();
        let pair = build_pair(spec)?;
        let mut cusped_cache: Option<CuspedTruncation> = None;
        let mut outcomes = Vec::new();
        let mut per_ms = Vec::new();

        if spec.truncation.is_some() {
            let t0 = Instant::now();
            let outcome = self
                .cusped(&pair, spec, &mut cusped_cache)
                .map(|x| AnalysisOutcome::Build { summary: x.summary().clone() })
                .unwrap_or_else(|e| AnalysisOutcome::Error {
                    analysis: "build".into(),
                    message: e.to_string(),
                });
            per_ms.push(t0.elapsed().as_secs_f64() * 1e3);
            outcomes.push(outcome);
        }

        for analysis in &spec.analyses {
            let t0 = Instant::now();
            let outcome = self
                .run_analysis(spec, &pair, analysis, &mut cusped_cache)
                .unwrap_or_else(|e| AnalysisOutcome::Error {
                    analysis: analysis_name(analysis).into(),
                    message: e.to_string(),
                });
            per_ms.push(t0.elapsed().as_secs_f64() * 1e3);
            outcomes.push(outcome);
        }
        let exit = if outcomes.iter().any(|o| o.is_error()) { 2 } else { 0 };
        let report = RunReport {
            schema_version: crate::runspec::SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            spec: spec.clone(),
            analyses: outcomes,
            timings: Timings {
                total_ms: start.elapsed().as_secs_f64() * 1e3,
                per_analysis_ms: per_ms,
            },
        };
        Ok((report, exit))
    }

    fn cusped<'a>(
        &self,
        pair: &GroupPair,
        spec: &RunSpec,
        cache: &'a mut Option<CuspedTruncation>,
    ) -> Result<&'a CuspedTruncation> {
        if cache.is_none() {
            let t = spec
                .truncation
                .as_ref()
                .ok_or_else(|| Error::Dependency("no [truncation] section".into()))?;
            let built = CuspedTruncation::build(
                pair.clone(),
                CuspedParams {
                    cayley_radius: t.cayley_radius,
                    horoball_depth: t.horoball_depth,
                    margin: t.margin,
                },
                &self.caps,
            )?;
            *cache = Some(built);
        }
        Ok(cache.as_ref().unwrap())
    }

    /// Build the graph a target names. Returns the graph plus the cusped
    /// truncation when the target is the cusped space (for vertex lookup).
    fn target_graph(
        &self,
        pair: &GroupPair,
        spec: &RunSpec,
        target: &SpaceTarget,
        cache: &mut Option<CuspedTruncation>,
    ) -> Result<SpaceGraph> {
        match target {
            SpaceTarget::Cusped => Ok(self.cusped(pair, spec, cache)?.graph().clone()),
            SpaceTarget::CayleyBall { radius } => {
                Ok(SpaceGraph::cayley_ball(pair.ambient(), *radius)?.0)
            }
            SpaceTarget::Horoball { peripheral, width_radius, max_depth } => {
                let h = self.horoball(pair, *peripheral, *width_radius, *max_depth)?;
                Ok(h.to_space_graph())
            }
        }
    }

    fn horoball(
        &self,
        pair: &GroupPair,
        peripheral: usize,
        width_radius: u32,
        max_depth: u32,
    ) -> Result<HoroballTruncation> {
        let per = pair
            .peripherals()
            .get(peripheral)
            .ok_or_else(|| Error::Input(format!("peripheral {peripheral} out of range")))?;
        let base = per
            .model()
            .clone()
            .with_radius_cap(per.model().radius_cap().max(width_radius));
        HoroballTruncation::over_ball(
            &base,
            HoroballParams { width_radius, max_depth },
            &self.caps,
        )
    }

    fn run_analysis(
        &self,
        spec: &RunSpec,
        pair: &GroupPair,
        analysis: &AnalysisSpec,
        cache: &mut Option<CuspedTruncation>,
    ) -> Result<AnalysisOutcome> {
        match analysis {
            AnalysisSpec::Delta { target, mode, sample_size, seed, thin_sample_size, thin_seed } => {
                let graph = self.target_graph(pair, spec, target, cache)?;
                let params = match mode {
                    ModeSpec::Exact => DeltaParams {
                        mode: DeltaMode::Exact,
                        sample_size: None,
                        seed: None,
                        exact_cutoff: self.caps.exact_delta_cutoff,
                    },
                    _ => DeltaParams {
                        mode: DeltaMode::Sampled,
                        sample_size: *sample_size,
                        seed: *seed,
                        exact_cutoff: self.caps.exact_delta_cutoff,
                    },
                };
                let mut report = hyperbolicity::four_point_delta(&graph, &params)?;
                let thin = match (thin_sample_size, thin_seed) {
                    (Some(n), Some(s)) => {
                        let t = hyperbolicity::thin_triangle_delta(&graph, *n, *s)?;
                        report.thin_triangle_delta = Some(t.delta);
                        Some(t)
                    }
                    _ => None,
                };
                Ok(AnalysisOutcome::Delta { report, thin })
            }
            AnalysisSpec::Distortion {
                peripheral,
                width_radius,
                max_depth,
                sample_size,
                seed,
                d_threshold,
                a_list,
                delta_mode,
                delta_sample_size,
                delta_seed,
            } => {
                let h = self.horoball(pair, *peripheral, *width_radius, *max_depth)?;
                let graph = h.to_space_graph();
                let params = match delta_mode {
                    ModeSpec::Exact => DeltaParams {
                        mode: DeltaMode::Exact,
                        sample_size: None,
                        seed: None,
                        exact_cutoff: self.caps.exact_delta_cutoff,
                    },
                    _ => DeltaParams {
                        mode: DeltaMode::Sampled,
                        sample_size: *delta_sample_size,
                        seed: *delta_seed,
                        exact_cutoff: self.caps.exact_delta_cutoff,
                    },
                };
                let delta = hyperbolicity::four_point_delta(&graph, &params)?;
                let delta_hat = delta.delta_fourpoint;
                let asynch = h.asynch_to_synch(
                    5.0 * delta_hat,
                    SampleSpec { size: (*sample_size).min(200), seed: seed.wrapping_add(1) },
                )?;
                let d_hat = d_threshold.unwrap_or(asynch.d_observed.max(1));
                let f_hat = 4.0 + 20.0 * delta_hat + d_hat as f64;
                let approx = h.approx_distance_check(
                    d_hat,
                    f_hat,
                    SampleSpec { size: *sample_size, seed: seed.wrapping_add(2) },
                )?;
                let dist = distortion::measure_distortion(
                    &h,
                    SampleSpec { size: *sample_size, seed: *seed },
                )?;
                let dil = distortion::check_dilation(
                    &h,
                    d_hat,
                    a_list,
                    SampleSpec { size: *sample_size, seed: seed.wrapping_add(3) },
                )?;
                let equivalence =
                    distortion::cross_check_equivalence(&dist, &dil, Some(f_hat))?;
                Ok(AnalysisOutcome::Distortion(Box::new(DistortionPipeline {
                    delta,
                    d_hat,
                    asynch,
                    f_hat,
                    approx_distance: approx,
                    distortion: dist,
                    dilation: dil,
                    equivalence,
                })))
            }
            AnalysisSpec::Perfection {
                target,
                basepoints,
                radii,
                mode,
                sample_size,
                seed,
                center_horizon,
                center_l_max,
                center_sample,
                center_seed,
            } => {
                let graph = self.target_graph(pair, spec, target, cache)?;
                let base_indices =
                    resolve_basepoints(pair, spec, target, basepoints, cache, self)?;
                let scan = perfection::equilateral_scan(
                    &graph,
                    &EquilateralParams {
                        basepoints: base_indices,
                        radii: radii.clone(),
                        mode: match mode {
                            ModeSpec::Exact => ScanMode::Exact,
                            ModeSpec::Sampled => ScanMode::Sampled,
                            ModeSpec::Auto => ScanMode::Auto,
                        },
                        sample_size: *sample_size,
                        seed: *seed,
                    },
                    &self.caps,
                )?;
                let center = match (center_sample, center_seed) {
                    (Some(k), Some(s)) => {
                        let mut rng = sampling::rng(*s);
                        let picks: Vec<u32> = sampling::sample_indices(
                            graph.vertex_count(),
                            *k,
                            &mut rng,
                        )
                        .into_iter()
                        .map(|i| i as u32)
                        .collect();
                        Some(perfection::center_criterion(
                            &graph,
                            &picks,
                            center_horizon.unwrap_or(3),
                            center_l_max.unwrap_or(3),
                        )?)
                    }
                    _ => None,
                };
                Ok(AnalysisOutcome::Perfection { scan, center })
            }
            AnalysisSpec::Extend { map, target, pairs, seed, group_radius, vertex_sample } => self
                .run_extend(
                    spec,
                    pair,
                    map,
                    target,
                    *pairs,
                    *seed,
                    group_radius.unwrap_or(2),
                    vertex_sample.unwrap_or(40),
                    cache,
                ),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn run_extend(
        &self,
        spec: &RunSpec,
        pair: &GroupPair,
        map: &MapDescriptor,
        target: &SpaceTarget,
        pairs: usize,
        seed: u64,
        group_radius: u32,
        vertex_sample: usize,
        cache: &mut Option<CuspedTruncation>,
    ) -> Result<AnalysisOutcome> {
        match (map, target) {
            (MapDescriptor::PeripheralScaling { factor }, SpaceTarget::Horoball { peripheral, width_radius, max_depth }) => {
                let h1 = self.horoball(pair, *peripheral, *width_radius, *max_depth)?;
                let h2 = self.horoball(pair, *peripheral, width_radius * (*factor as u32), *max_depth)?;
                let base = h1.base();
                let images: Vec<GroupElement> = (0..base.generator_count() as u16)
                    .map(|g| {
                        base.normal_form(&[crate::groups::Syllable::new(g, *factor as i64)])
                            .expect("generator exists")
                    })
                    .collect();
                let hom = GroupHom::new(base, h2.base(), images)?;
                let vmap = extension::extend_horoball(&hom, &h1, &h2)?;
                let g1 = h1.to_space_graph();
                let g2 = h2.to_space_graph();
                let eligible = horoball_core(&h1);
                let fit = extension::measure_qi(&g1, &g2, &vmap, None, &eligible, pairs, seed)?;
                // Functoriality: scaling twice vs scaling by factor^2.
                let h3 = self.horoball(
                    pair,
                    *peripheral,
                    width_radius * (*factor as u32) * (*factor as u32),
                    *max_depth,
                )?;
                let hom23 = GroupHom::new(h2.base(), h3.base(), {
                    (0..h2.base().generator_count() as u16)
                        .map(|g| {
                            h2.base()
                                .normal_form(&[crate::groups::Syllable::new(g, *factor as i64)])
                                .expect("generator exists")
                        })
                        .collect()
                })?;
                let hom13 = hom23.compose(&hom)?;
                let m23 = extension::extend_horoball(&hom23, &h2, &h3)?;
                let m13 = extension::extend_horoball(&hom13, &h1, &h3)?;
                let g3 = h3.to_space_graph();
                let f_sup = extension::functoriality_sup(&g3, &vmap, &m23, &m13, &eligible);
                Ok(AnalysisOutcome::Extension(ExtensionReport {
                    map: format!("peripheral_scaling x{factor}"),
                    lambda_fit: fit.lambda_fit,
                    eps_fit: fit.eps_fit,
                    roundtrip_sup: fit.roundtrip_sup,
                    nu_fit: None,
                    functoriality_sup: Some(f_sup),
                    clamped_vertices: vmap.clamped,
                    pairs_used: fit.pairs_used,
                    seed,
                    r_observed: None,
                    coset_correspondences: Vec::new(),
                }))
            }
            (MapDescriptor::Identity, SpaceTarget::Cusped)
            | (MapDescriptor::GeneratorImages { .. }, SpaceTarget::Cusped) => {
                let x = self.cusped(pair, spec, cache)?.clone();
                let (kind, images) = match map {
                    MapDescriptor::Identity => (
                        PairMapKind::Identity,
                        GroupHom::identity(pair.ambient()),
                    ),
                    MapDescriptor::GeneratorImages { images } => {
                        let imgs: Vec<GroupElement> = images
                            .iter()
                            .map(|w| pair.ambient().parse_word(w))
                            .collect::<Result<_>>()?;
                        (
                            PairMapKind::Automorphism,
                            GroupHom::new(pair.ambient(), pair.ambient(), imgs)?,
                        )
                    }
                    _ => unreachable!(),
                };
                let probe = spec
                    .truncation
                    .as_ref()
                    .map(|t| t.cayley_radius.min(3))
                    .unwrap_or(2);
                let pm = extension::make_pair_map(
                    pair,
                    pair,
                    kind,
                    images_of(&images, pair.ambient()),
                    probe,
                    None,
                )?;
                let vmap = extension::extend_cusped(&pm, &x, &x)?;
                let g = x.graph().clone();
                let eligible: Vec<u32> = (0..g.vertex_count() as u32).collect();
                let inverse = matches!(map, MapDescriptor::Identity).then(|| vmap.clone());
                let fit = extension::measure_qi(
                    &g,
                    &g,
                    &vmap,
                    inverse.as_ref(),
                    &eligible,
                    pairs,
                    seed,
                )?;
                let nu = extension::equivariance_defect(
                    &pm,
                    &x,
                    &x,
                    &vmap,
                    group_radius,
                    vertex_sample,
                    seed.wrapping_add(1),
                )?;
                // Functoriality against the composite with itself, when the
                // composite still lands in the truncation.
                let f_sup = self
                    .composite_functoriality(&pm, &x, &vmap, &eligible)
                    .ok();
                Ok(AnalysisOutcome::Extension(ExtensionReport {
                    map: match map {
                        MapDescriptor::Identity => "identity".to_string(),
                        MapDescriptor::GeneratorImages { images } => {
                            format!("automorphism [{}]", images.join(", "))
                        }
                        _ => unreachable!(),
                    },
                    lambda_fit: fit.lambda_fit,
                    eps_fit: fit.eps_fit,
                    roundtrip_sup: fit.roundtrip_sup,
                    nu_fit: Some(nu),
                    functoriality_sup: f_sup,
                    clamped_vertices: vmap.clamped,
                    pairs_used: fit.pairs_used,
                    seed,
                    r_observed: Some(pm.r_observed),
                    coset_correspondences: pm.correspondences.clone(),
                }))
            }
            _ => Err(Error::Input(
                "unsupported map/target combination for extend".into(),
            )),
        }
    }

    fn composite_functoriality(
        &self,
        pm: &PairMap,
        x: &CuspedTruncation,
        vmap: &VertexMap,
        eligible: &[u32],
    ) -> Result<u32> {
        let composite_hom = pm.hom().compose(pm.hom())?;
        let images: Vec<GroupElement> = (0..x.pair().ambient().generator_count() as u16)
            .map(|g| {
                composite_hom.apply(
                    &x.pair()
                        .ambient()
                        .normal_form(&[crate::groups::Syllable::new(g, 1)])
                        .expect("generator exists"),
                )
            })
            .collect();
        let pm2 = extension::make_pair_map(
            x.pair(),
            x.pair(),
            pm.kind,
            images,
            x.params().cayley_radius.min(3),
            None,
        )?;
        let direct = extension::extend_cusped(&pm2, x, x)?;
        Ok(extension::functoriality_sup(
            x.graph(),
            vmap,
            vmap,
            &direct,
            eligible,
        ))
    }
}

fn images_of(hom: &GroupHom, model: &GroupModel) -> Vec<GroupElement> {
    (0..model.generator_count() as u16)
        .map(|g| {
            hom.apply(
                &model
                    .normal_form(&[crate::groups::Syllable::new(g, 1)])
                    .expect("generator exists"),
            )
        })
        .collect()
}

/// Core vertices of a horoball truncation used as the eligible sample
/// domain: elements within half the width radius, any depth.
fn horoball_core(h: &HoroballTruncation) -> Vec<u32> {
    let half = h.width_radius().map(|r| r as u64 / 2).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for idx in 0..h.vertex_count() as u32 {
        let (e, _) = h.vertex(idx);
        if h.base().word_length(&h.width()[e as usize]) <= half {
            out.push(idx);
        }
    }
    out
}

fn build_pair(spec: &RunSpec) -> Result<GroupPair> {
    let mut pair = GroupPair::from_descriptor(&spec.pair)?;
    if let Some(t) = &spec.truncation {
        if let Some(cap) = t.radius_cap {
            let ambient = pair.ambient().clone().with_radius_cap(cap);
            let gens: Vec<Vec<u16>> = pair
                .peripherals()
                .iter()
                .map(|p| p.gens().to_vec())
                .collect();
            pair = GroupPair::new(ambient, gens)?;
        }
    }
    Ok(pair)
}

fn resolve_basepoints(
    pair: &GroupPair,
    spec: &RunSpec,
    target: &SpaceTarget,
    basepoints: &[String],
    cache: &mut Option<CuspedTruncation>,
    runner: &Runner,
) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    match target {
        SpaceTarget::Cusped => {
            let x = runner.cusped(pair, spec, cache)?;
            for w in basepoints {
                let g = pair.ambient().parse_word(w)?;
                let idx = x
                    .vertex_index(&crate::cusped::SpaceVertex::Cayley(g))
                    .ok_or_else(|| {
                        Error::Input(format!("basepoint '{w}' outside the truncation"))
                    })?;
                out.push(idx);
            }
        }
        SpaceTarget::CayleyBall { radius } => {
            let (_, ball) = SpaceGraph::cayley_ball(pair.ambient(), *radius)?;
            for w in basepoints {
                let g = pair.ambient().parse_word(w)?;
                let idx = ball
                    .iter()
                    .position(|x| *x == g)
                    .ok_or_else(|| Error::Input(format!("basepoint '{w}' outside the ball")))?;
                out.push(idx as u32);
            }
        }
        SpaceTarget::Horoball { peripheral, width_radius, max_depth } => {
            let h = runner.horoball(pair, *peripheral, *width_radius, *max_depth)?;
            for w in basepoints {
                let per = &pair.peripherals()[*peripheral];
                let g = per.model().parse_word(w)?;
                let e = h
                    .width_index_of(&g)
                    .ok_or_else(|| Error::Input(format!("basepoint '{w}' outside the width")))?;
                out.push(h.index(e, 0));
            }
        }
    }
    Ok(out)
}

fn analysis_name(a: &AnalysisSpec) -> &'static str {
    match a {
        AnalysisSpec::Delta { .. } => "delta",
        AnalysisSpec::Distortion { .. } => "distortion",
        AnalysisSpec::Perfection { .. } => "perfection",
        AnalysisSpec::Extend { .. } => "extend",
    }
}

/// Filter a spec's analyses by subcommand name; `None` keeps everything.
pub fn filter_spec(spec: &RunSpec, only: Option<&str>) -> RunSpec {
    match only {
        None => spec.clone(),
        Some(name) => {
            let mut s = spec.clone();
            s.analyses.retain(|a| analysis_name(a) == name);
            s
        }
    }
}
