//! Maps of group pairs, their cusp extensions over horoballs, and the
//! measured quasi-isometry constants.
//!
//! A map is given by generator images (validated against the relators of the
//! built-in kinds). Extensions send a Cayley vertex through the map and a
//! horoball vertex `(coset, p, t)` to the corresponding coset at the same
//! depth (identity dilation), with the image element re-expressed relative
//! to the target coset's canonical representative via nearest-point
//! projection.

use crate::cusped::{CuspedTruncation, SpaceVertex};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupModel, GroupPair, PrimitiveKind, Syllable};
use crate::horoball::HoroballTruncation;
use crate::sampling;
use crate::space::SpaceGraph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A homomorphism given on generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: GroupModel,
    target: GroupModel,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn identity(model: &GroupModel) -> Self {
        let images = (0..model.generator_count() as u16)
            .map(|g| {
                model
                    .normal_form(&[Syllable::new(g, 1)])
                    .expect("generator exists")
            })
            .collect();
        GroupHom {
            source: model.clone(),
            target: model.clone(),
            images,
        }
    }

    /// Validate generator images against the relators of the source kind:
    /// free factors impose nothing, abelian factors need commuting images,
    /// cyclic factors need the image of the generator to have that order.
    pub fn new(source: &GroupModel, target: &GroupModel, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::Input(format!(
                "expected {} generator images, got {}",
                source.generator_count(),
                images.len()
            )));
        }
        for f in source.factors() {
            match f.kind {
                PrimitiveKind::Free { .. } => {}
                PrimitiveKind::FreeAbelian { .. } => {
                    for i in f.first_gen..f.first_gen + f.gen_count {
                        for j in (i + 1)..f.first_gen + f.gen_count {
                            let ij = target.multiply(&images[i], &images[j]);
                            let ji = target.multiply(&images[j], &images[i]);
                            if ij != ji {
                                return Err(Error::Input(format!(
                                    "images of commuting generators #{i} and #{j} do not commute"
                                )));
                            }
                        }
                    }
                }
                PrimitiveKind::FiniteCyclic { order } => {
                    let mut acc = target.identity();
                    let mut sq = images[f.first_gen].clone();
                    let mut e = order;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = target.multiply(&acc, &sq);
                        }
                        e >>= 1;
                        if e > 0 {
                            sq = target.multiply(&sq, &sq);
                        }
                    }
                    if !acc.is_identity() {
                        return Err(Error::Input(format!(
                            "image of the order-{order} generator does not have that order"
                        )));
                    }
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn source(&self) -> &GroupModel {
        &self.source
    }

    pub fn target(&self) -> &GroupModel {
        &self.target
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let mut acc = self.target.identity();
        for s in g.syllables() {
            let img = &self.images[s.gen as usize];
            let base = if s.exp >= 0 {
                img.clone()
            } else {
                self.target.invert(img)
            };
            // Square-and-multiply; exponents can be large on abelian parts.
            let mut power = self.target.identity();
            let mut sq = base;
            let mut e = s.exp.unsigned_abs();
            while e > 0 {
                if e & 1 == 1 {
                    power = self.target.multiply(&power, &sq);
                }
                e >>= 1;
                if e > 0 {
                    sq = self.target.multiply(&sq, &sq);
                }
            }
            acc = self.target.multiply(&acc, &power);
        }
        acc
    }

    /// `self` after `first`: `(self . first)(g) = self(first(g))`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if !first.target.same_shape(&self.source) {
            return Err(Error::Dependency(
                "composition needs matching middle groups".into(),
            ));
        }
        let images = first.images.iter().map(|img| self.apply(img)).collect();
        GroupHom::new(&first.source, &self.target, images)
    }
}

/// Word metric for a custom (possibly non-standard) generating set, by
/// bounded BFS. Exact within the explored radius.
#[derive(Clone, Debug)]
pub struct WordMetric {
    model: GroupModel,
    gens: Vec<GroupElement>,
}

impl WordMetric {
    pub fn new(model: &GroupModel, generators: Vec<GroupElement>) -> Result<Self> {
        if generators.iter().any(|g| g.is_identity()) {
            return Err(Error::Input("generating set contains the identity".into()));
        }
        let mut gens = generators.clone();
        for g in &generators {
            gens.push(model.invert(g));
        }
        gens.sort_by(|a, b| model.cmp_shortlex(a, b));
        gens.dedup();
        Ok(WordMetric { model: model.clone(), gens })
    }

    /// BFS distance, `None` if beyond `cap`.
    pub fn distance(&self, a: &GroupElement, b: &GroupElement, cap: u32) -> Option<u32> {
        let target = self.model.multiply(&self.model.invert(a), b);
        if target.is_identity() {
            return Some(0);
        }
        let mut seen: HashMap<GroupElement, ()> = HashMap::new();
        seen.insert(self.model.identity(), ());
        let mut frontier = vec![self.model.identity()];
        for layer in 1..=cap {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &self.gens {
                    let h = self.model.multiply(g, s);
                    if h == target {
                        return Some(layer);
                    }
                    if !seen.contains_key(&h) {
                        seen.insert(h.clone(), ());
                        next.push(h);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMapKind {
    Identity,
    Automorphism,
    PeripheralScaling,
    Inclusion,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetCorrespondence {
    pub source_peripheral: usize,
    pub source_rep: String,
    pub target_peripheral: usize,
    pub target_rep: String,
    pub radius: u32,
}

/// A map of pairs: a homomorphism whose coset images stay near single
/// target cosets, measured on a probe ball.
#[derive(Clone, Debug)]
pub struct PairMap {
    pub kind: PairMapKind,
    hom: GroupHom,
    source: GroupPair,
    target: GroupPair,
    pub r_observed: u32,
    pub correspondences: Vec<CosetCorrespondence>,
    /// Peripheral index map derived from the correspondence probe.
    peripheral_map: Vec<usize>,
    /// Alternate target word metric (identity-regenerated maps).
    pub target_metric: Option<WordMetric>,
}

impl PairMap {
    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn source(&self) -> &GroupPair {
        &self.source
    }

    pub fn target(&self) -> &GroupPair {
        &self.target
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        self.hom.apply(g)
    }

    pub fn peripheral_target(&self, p: usize) -> usize {
        self.peripheral_map[p]
    }
}

/// Build a pair map from generator images and measure its coset constant
/// `R` by brute force over cosets meeting the probe ball.
pub fn make_pair_map(
    source: &GroupPair,
    target: &GroupPair,
    kind: PairMapKind,
    images: Vec<GroupElement>,
    probe_radius: u32,
    target_metric: Option<WordMetric>,
) -> Result<PairMap> {
    let hom = GroupHom::new(source.ambient(), target.ambient(), images)?;
    let ambient_t = target.ambient();
    let cosets = source.enumerate_peripheral_cosets(probe_radius)?;
    let mut peripheral_map: Vec<Option<usize>> = vec![None; source.peripherals().len()];
    let mut correspondences = Vec::new();
    let mut r_observed = 0u32;
    for (p, rep) in &cosets {
        // Probe points of the source coset: rep * (peripheral ball).
        let per = &source.peripherals()[*p];
        let probe = per
            .model()
            .ball_bounded(&per.model().identity(), probe_radius.min(3), 4_096)?;
        let points: Vec<GroupElement> = probe
            .iter()
            .map(|q| {
                hom.apply(
                    &source
                        .ambient()
                        .multiply(rep, &per.from_coords(source.ambient(), q)),
                )
            })
            .collect();
        // Best target coset: minimize the max distance of probe images.
        let mut best: Option<(u32, usize, GroupElement)> = None;
        for tp in 0..target.peripherals().len() {
            let trep = target.coset_representative(tp, &hom.apply(rep));
            let r = match &target_metric {
                None => points
                    .iter()
                    .map(|x| target.distance_to_coset(tp, &trep, x) as u32)
                    .max()
                    .unwrap_or(0),
                Some(metric) => {
                    // Distance to the coset under the custom metric, by
                    // scanning coset points near the projection.
                    points
                        .iter()
                        .map(|x| {
                            let proj = target.peripheral_projection(
                                tp,
                                &ambient_t.multiply(&ambient_t.invert(&trep), x),
                            );
                            let near = ambient_t.multiply(&trep, &proj);
                            metric.distance(x, &near, 64).unwrap_or(u32::MAX)
                        })
                        .max()
                        .unwrap_or(0)
                }
            };
            let better = match &best {
                None => true,
                Some((br, ..)) => r < *br,
            };
            if better {
                best = Some((r, tp, trep));
            }
        }
        let (r, tp, trep) =
            best.ok_or_else(|| Error::Dependency("target pair has no peripherals".into()))?;
        match peripheral_map[*p] {
            None => peripheral_map[*p] = Some(tp),
            Some(prev) if prev != tp => {
                return Err(Error::Input(format!(
                    "cosets of source peripheral {p} map near different target peripherals ({prev} and {tp})"
                )));
            }
            _ => {}
        }
        r_observed = r_observed.max(r);
        correspondences.push(CosetCorrespondence {
            source_peripheral: *p,
            source_rep: source.ambient().display(rep),
            target_peripheral: tp,
            target_rep: target.ambient().display(&trep),
            radius: r,
        });
    }
    let peripheral_map = peripheral_map
        .into_iter()
        .enumerate()
        .map(|(p, m)| m.ok_or_else(|| Error::Invariant(format!("peripheral {p} never probed"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairMap {
        kind,
        hom,
        source: source.clone(),
        target: target.clone(),
        r_observed,
        correspondences,
        peripheral_map,
        target_metric,
    })
}

/// Vertex map of an extension, total on the source truncation.
#[derive(Clone, Debug)]
pub struct VertexMap {
    pub forward: Vec<u32>,
    /// Vertices whose depth was clamped to the target's max depth.
    pub clamped: usize,
}

/// Extend a base-group homomorphism over standalone horoballs:
/// `(p, t) -> (phi(p), t)`, depth clamped to the target (flagged).
pub fn extend_horoball(
    hom: &GroupHom,
    h1: &HoroballTruncation,
    h2: &HoroballTruncation,
) -> Result<VertexMap> {
    let mut forward = Vec::with_capacity(h1.vertex_count());
    let mut clamped = 0usize;
    let mut needed_width: u64 = 0;
    for idx in 0..h1.vertex_count() as u32 {
        let (e, d) = h1.vertex(idx);
        let img = hom.apply(&h1.width()[e as usize]);
        let Some(te) = h2.width_index_of(&img) else {
            needed_width = needed_width.max(h2.base().word_length(&img));
            forward.push(u32::MAX);
            continue;
        };
        let td = if d > h2.max_depth() {
            clamped += 1;
            h2.max_depth()
        } else {
            d
        };
        forward.push(h2.index(te, td));
    }
    if needed_width > 0 {
        return Err(Error::InsufficientTarget {
            width: needed_width as u32,
            depth: h1.max_depth(),
        });
    }
    Ok(VertexMap { forward, clamped })
}

/// Extend a pair map over cusped truncations: Cayley vertices through the
/// map, horoball vertices to the corresponding coset at the same depth.
pub fn extend_cusped(
    map: &PairMap,
    x1: &CuspedTruncation,
    x2: &CuspedTruncation,
) -> Result<VertexMap> {
    let amb2 = x2.pair().ambient();
    let mut forward = Vec::with_capacity(x1.graph().vertex_count());
    let mut clamped = 0usize;
    let n2 = x2.params().horoball_depth;
    for idx in 0..x1.graph().vertex_count() as u32 {
        match x1.describe(idx) {
            SpaceVertex::Cayley(g) => {
                let img = map.apply(&g);
                match x2.vertex_index(&SpaceVertex::Cayley(img.clone())) {
                    Some(t) => forward.push(t),
                    None => {
                        return Err(Error::InsufficientTarget {
                            width: amb2.word_length(&img) as u32,
                            depth: n2,
                        })
                    }
                }
            }
            SpaceVertex::Horoball { coset, element, depth } => {
                let block = &x1.cosets()[coset];
                let p = block.peripheral;
                let per1 = &x1.pair().peripherals()[p];
                let tp = map.peripheral_target(p);
                let per2 = &x2.pair().peripherals()[tp];
                let x = x1.pair().ambient().multiply(
                    &block.rep,
                    &per1.from_coords(x1.pair().ambient(), &element),
                );
                let img = map.apply(&x);
                let trep = x2.pair().coset_representative(tp, &img);
                let Some(tc) = x2.coset_id(tp, &trep) else {
                    return Err(Error::InsufficientTarget {
                        width: amb2.word_length(&trep) as u32,
                        depth: n2,
                    });
                };
                // Nearest-point projection into the target coset, in the
                // coset's own coordinates.
                let local = amb2.multiply(&amb2.invert(&trep), &img);
                let proj = x2.pair().peripheral_projection(tp, &local);
                let q = per2.to_coords(amb2, &proj)?;
                let td = if depth > n2 {
                    clamped += 1;
                    n2.max(1)
                } else {
                    depth
                };
                match x2.vertex_index(&SpaceVertex::Horoball {
                    coset: tc as usize,
                    element: q.clone(),
                    depth: td,
                }) {
                    Some(t) => forward.push(t),
                    None => {
                        return Err(Error::InsufficientTarget {
                            width: per2.model().word_length(&q) as u32,
                            depth: n2,
                        })
                    }
                }
            }
        }
    }
    Ok(VertexMap { forward, clamped })
}

#[derive(Clone, Debug, Serialize)]
pub struct QiFit {
    pub lambda_fit: f64,
    pub eps_fit: f64,
    pub pairs_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roundtrip_sup: Option<u32>,
}

/// Fit `(lambda, eps)` validating both coarse-Lipschitz inequalities over
/// sampled pairs from `eligible`. Lambda walks a quarter-step grid and stops
/// at diminishing returns (one more step saves less than 1 in eps), so the
/// identity fits as exactly (1, 0).
pub fn measure_qi(
    g1: &SpaceGraph,
    g2: &SpaceGraph,
    fwd: &VertexMap,
    bwd: Option<&VertexMap>,
    eligible: &[u32],
    pairs: usize,
    seed: u64,
) -> Result<QiFit> {
    if fwd.forward.len() != g1.vertex_count() {
        return Err(Error::Dependency(
            "vertex map does not match the source graph".into(),
        ));
    }
    if let Some(b) = bwd {
        if b.forward.len() != g2.vertex_count() {
            return Err(Error::Dependency(
                "inverse vertex map does not match the target graph".into(),
            ));
        }
    }
    if eligible.len() < 2 {
        return Err(Error::EmptySample("qi measurement".into()));
    }
    let mut rng = sampling::rng(seed);
    let sample = sampling::sample_pairs(eligible.len(), pairs, &mut rng);
    let mut sources: Vec<u32> = sample.iter().map(|&(i, _)| eligible[i]).collect();
    sources.sort_unstable();
    sources.dedup();
    let rows1: HashMap<u32, Vec<u32>> = sources.iter().map(|&s| (s, g1.bfs(s))).collect();
    let mut img_sources: Vec<u32> = sources.iter().map(|&s| fwd.forward[s as usize]).collect();
    img_sources.sort_unstable();
    img_sources.dedup();
    let rows2: HashMap<u32, Vec<u32>> = img_sources.iter().map(|&s| (s, g2.bfs(s))).collect();
    let mut data: Vec<(u32, u32)> = Vec::with_capacity(sample.len());
    for &(i, j) in &sample {
        let (u, v) = (eligible[i], eligible[j]);
        let d1 = rows1[&u][v as usize];
        let d2 = rows2[&fwd.forward[u as usize]][fwd.forward[v as usize] as usize];
        data.push((d1, d2));
    }
    let (lambda_fit, eps_fit) = fit_lambda_eps(&data);
    let roundtrip_sup = bwd.map(|b| {
        eligible
            .iter()
            .map(|&u| {
                let back = b.forward[fwd.forward[u as usize] as usize];
                if back == u {
                    return 0;
                }
                rows1
                    .get(&u)
                    .map(|r| r[back as usize])
                    .unwrap_or_else(|| g1.distance(back, u))
            })
            .max()
            .unwrap_or(0)
    });
    Ok(QiFit {
        lambda_fit,
        eps_fit,
        pairs_used: data.len(),
        roundtrip_sup,
    })
}

fn fit_lambda_eps(data: &[(u32, u32)]) -> (f64, f64) {
    let eps_at = |lambda: f64| -> f64 {
        data.iter()
            .map(|&(d1, d2)| {
                let a = d2 as f64 - lambda * d1 as f64;
                let b = d1 as f64 - lambda * d2 as f64;
                a.max(b)
            })
            .fold(0.0f64, f64::max)
    };
    let mut lambda = 1.0;
    loop {
        let e = eps_at(lambda);
        let e_next = eps_at(lambda + 0.25);
        if e - e_next < 1.0 || lambda >= 64.0 {
            return (lambda, e);
        }
        lambda += 0.25;
    }
}

/// Sup distance between the composite of two extensions and the extension
/// of the composite, over eligible source vertices.
pub fn functoriality_sup(
    g3: &SpaceGraph,
    first: &VertexMap,
    second: &VertexMap,
    direct: &VertexMap,
    eligible: &[u32],
) -> u32 {
    eligible
        .iter()
        .map(|&u| {
            let via = second.forward[first.forward[u as usize] as usize];
            let straight = direct.forward[u as usize];
            if via == straight {
                0
            } else {
                g3.distance(via, straight)
            }
        })
        .max()
        .unwrap_or(0)
}

/// Rough-equivariance defect of a cusped extension when source and target
/// pairs coincide: `max d( map(gamma . u), phi(gamma) . map(u) )` over
/// sampled group elements and vertices where both sides are defined.
pub fn equivariance_defect(
    map: &PairMap,
    x1: &CuspedTruncation,
    x2: &CuspedTruncation,
    vmap: &VertexMap,
    group_radius: u32,
    vertex_sample: usize,
    seed: u64,
) -> Result<u32> {
    let ambient = x1.pair().ambient();
    let gammas = ambient.ball(&ambient.identity(), group_radius)?;
    let mut rng = sampling::rng(seed);
    let n1 = x1.graph().vertex_count();
    let picks = sampling::sample_indices(n1, vertex_sample, &mut rng);
    let mut worst = 0u32;
    let mut used = 0usize;
    for gamma in &gammas {
        if gamma.is_identity() {
            continue;
        }
        let img_gamma = map.apply(gamma);
        for &u in &picks {
            let u = u as u32;
            let Some(gu) = x1.act(gamma, u) else { continue };
            let lhs = vmap.forward[gu as usize];
            let Some(rhs) = x2.act(&img_gamma, vmap.forward[u as usize]) else {
                continue;
            };
            used += 1;
            if lhs != rhs {
                worst = worst.max(x2.graph().distance(lhs, rhs));
            }
        }
    }
    if used == 0 {
        return Err(Error::EmptySample("equivariance defect".into()));
    }
    Ok(worst)
}
