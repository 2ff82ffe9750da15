//! Truncated combinatorial horoballs.
//!
//! Over a base group `P` with exact word metric, the horoball has vertex set
//! `W x {0..N}` for a finite width set `W` and depth bound `N`. Vertices
//! `(v, n)` and `(v, n+1)` are joined by a vertical edge; `(v, n)` and
//! `(w, n)` by a horizontal edge iff `1 <= d_P(v, w) <= floor(e^n)`. The
//! depth-0 level is then exactly the induced Cayley subgraph on `W`.
//!
//! Adjacency is implicit: BFS walks generator balls / distance rows instead
//! of materialized edge lists, so deep (nearly complete) levels cost memory
//! proportional to `|W|^2` once, not per level.

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupModel, PrimitiveKind};
use crate::sampling;
use crate::space::{SpaceGraph, VertexLabel, UNREACHED};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Horizontal reach at depth `n`: `floor(e^n)`. The definition compares the
/// integer base metric against the real number `e^n`; flooring makes the
/// threshold integral without changing which edges exist.
pub fn horizontal_range(n: u32) -> u64 {
    assert!(n <= 25, "depth out of supported range");
    (n as f64).exp().floor() as u64
}

/// Smallest depth `n` with `horizontal_range(n) >= d` (integer `ceil(ln d)`).
pub fn required_depth(d: u64) -> u32 {
    let mut n = 0;
    while horizontal_range(n) < d {
        n += 1;
    }
    n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HoroballParams {
    pub width_radius: u32,
    pub max_depth: u32,
}

/// A vertex `(element, depth)` of the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoroVertex {
    pub element: GroupElement,
    pub depth: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HorofunctionCheckReport {
    pub d1_observed: u32,
    pub pairs_checked: usize,
    pub delta_hat: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsynchToSynchReport {
    /// Max synchronous distance over sampled points that were within `l` of
    /// a translated ray; the measured `D(l)`.
    pub d_observed: u32,
    pub points_checked: usize,
    pub l: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowcentersReport {
    pub checked: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxDistanceReport {
    pub d_threshold: u32,
    pub f_bound: f64,
    /// Largest `| d((p,0),(q,0)) - 2 t0 |` seen.
    pub max_abs_error: u32,
    pub violations: usize,
    pub pairs_checked: usize,
    pub seed: u64,
}

/// Sample sizes for the seeded checks.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleSpec {
    pub size: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct HoroballTruncation {
    base: GroupModel,
    width: Vec<GroupElement>,
    width_index: HashMap<GroupElement, u32>,
    width_radius: Option<u32>,
    max_depth: u32,
    /// Pairwise base distances over the width set.
    base_dist: Vec<u32>,
    diameter: u32,
    /// Fast path for line bases (Z): width elements as integers, sorted.
    line: Option<LineIndex>,
}

#[derive(Clone, Debug)]
struct LineIndex {
    /// Exponent value per width index.
    value: Vec<i64>,
    /// `(value, width index)` sorted by value.
    by_value: Vec<(i64, u32)>,
}

impl HoroballTruncation {
    /// Standard truncation: width is the `width_radius`-ball about e in the
    /// base group. The width enumeration is guarded by the vertex budget
    /// rather than the group's ball-radius cap.
    pub fn over_ball(
        base: &GroupModel,
        params: HoroballParams,
        caps: &ResourceCaps,
    ) -> Result<Self> {
        let per_element = params.max_depth as usize + 1;
        let budget = caps.max_vertices / per_element.max(1);
        let width = base.ball_bounded(&base.identity(), params.width_radius, budget)?;
        let mut h = Self::with_width(base.clone(), width, params.max_depth, caps)?;
        h.width_radius = Some(params.width_radius);
        Ok(h)
    }

    /// Truncation over an explicit width set (used for cusped cosets).
    pub fn with_width(
        base: GroupModel,
        mut width: Vec<GroupElement>,
        max_depth: u32,
        caps: &ResourceCaps,
    ) -> Result<Self> {
        if max_depth > 20 {
            return Err(Error::Config("max_depth above supported bound 20".into()));
        }
        if width.is_empty() {
            return Err(Error::Input("horoball width set is empty".into()));
        }
        width.sort_by(|a, b| base.cmp_shortlex(a, b));
        width.dedup();
        caps.check_vertices(width.len() * (max_depth as usize + 1))?;
        let width_index: HashMap<GroupElement, u32> = width
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
        let n = width.len();
        let mut base_dist = vec![0u32; n * n];
        let mut diameter = 0u32;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = base.distance(&width[i], &width[j]) as u32;
                base_dist[i * n + j] = d;
                base_dist[j * n + i] = d;
                diameter = diameter.max(d);
            }
        }
        let line = line_index(&base, &width);
        Ok(HoroballTruncation {
            base,
            width,
            width_index,
            width_radius: None,
            max_depth,
            base_dist,
            diameter,
            line,
        })
    }

    pub fn base(&self) -> &GroupModel {
        &self.base
    }

    pub fn width(&self) -> &[GroupElement] {
        &self.width
    }

    pub fn width_radius(&self) -> Option<u32> {
        self.width_radius
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn vertex_count(&self) -> usize {
        self.width.len() * (self.max_depth as usize + 1)
    }

    pub fn base_distance(&self, i: u32, j: u32) -> u32 {
        self.base_dist[i as usize * self.width.len() + j as usize]
    }

    pub fn width_index_of(&self, g: &GroupElement) -> Option<u32> {
        self.width_index.get(g).copied()
    }

    /// Vertex index of `(element index, depth)`; element-major, then depth.
    pub fn index(&self, elem: u32, depth: u32) -> u32 {
        debug_assert!(depth <= self.max_depth);
        elem * (self.max_depth + 1) + depth
    }

    pub fn vertex(&self, idx: u32) -> (u32, u32) {
        (idx / (self.max_depth + 1), idx % (self.max_depth + 1))
    }

    pub fn vertex_of(&self, v: &HoroVertex) -> Option<u32> {
        if v.depth > self.max_depth {
            return None;
        }
        self.width_index_of(&v.element).map(|e| self.index(e, v.depth))
    }

    pub fn describe(&self, idx: u32) -> HoroVertex {
        let (e, d) = self.vertex(idx);
        HoroVertex {
            element: self.width[e as usize].clone(),
            depth: d,
        }
    }

    /// The depth horofunction: `-depth`. Constant along horizontal edges,
    /// changes by one along vertical edges.
    pub fn depth_horofunction(&self, idx: u32) -> i64 {
        -(self.vertex(idx).1 as i64)
    }

    /// The vertical ray `t -> (p, t)` as vertex indices, `t` in `0..=N`.
    pub fn vertical_ray(&self, p: &GroupElement) -> Result<Vec<u32>> {
        let e = self.width_index_of(p).ok_or_else(|| {
            Error::Input(format!("element {} not in horoball width", self.base.display(p)))
        })?;
        Ok((0..=self.max_depth).map(|t| self.index(e, t)).collect())
    }

    fn for_each_neighbor(&self, idx: u32, mut f: impl FnMut(u32)) {
        let (e, d) = self.vertex(idx);
        if d > 0 {
            f(self.index(e, d - 1));
        }
        if d < self.max_depth {
            f(self.index(e, d + 1));
        }
        let range = horizontal_range(d);
        if range >= self.diameter as u64 {
            // Complete level.
            for j in 0..self.width.len() as u32 {
                if j != e {
                    f(self.index(j, d));
                }
            }
            return;
        }
        if let Some(line) = &self.line {
            // Interval arithmetic on a line base: neighbors occupy two
            // contiguous value ranges around v.
            let v = line.value[e as usize];
            let r = range as i64;
            let lo = line.by_value.partition_point(|&(x, _)| x < v - r);
            let hi = line.by_value.partition_point(|&(x, _)| x <= v + r);
            for &(x, j) in &line.by_value[lo..hi] {
                if x != v {
                    f(self.index(j, d));
                }
            }
            return;
        }
        let n = self.width.len();
        let row = &self.base_dist[e as usize * n..(e as usize + 1) * n];
        for (j, &dist) in row.iter().enumerate() {
            if dist >= 1 && dist as u64 <= range {
                f(self.index(j as u32, d));
            }
        }
    }

    /// BFS distances from a vertex over the implicit adjacency.
    pub fn distances_from(&self, src: u32) -> Vec<u32> {
        let n = self.vertex_count();
        let mut dist = vec![UNREACHED; n];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            self.for_each_neighbor(u, |v| {
                if dist[v as usize] == UNREACHED {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            });
        }
        dist
    }

    /// Exact shortest-path distance in the truncation.
    pub fn distance(&self, u: u32, v: u32) -> u32 {
        if u == v {
            return 0;
        }
        self.distances_from(u)[v as usize]
    }

    pub fn distance_vertices(&self, u: &HoroVertex, v: &HoroVertex) -> Result<u32> {
        let ui = self
            .vertex_of(u)
            .ok_or_else(|| Error::Input("vertex outside truncation".into()))?;
        let vi = self
            .vertex_of(v)
            .ok_or_else(|| Error::Input("vertex outside truncation".into()))?;
        let d = self.distance(ui, vi);
        if d == UNREACHED {
            return Err(Error::Invariant("horoball truncation is disconnected".into()));
        }
        Ok(d)
    }

    /// Materialize the truncation for the generic graph analyses.
    pub fn to_space_graph(&self) -> SpaceGraph {
        let n = self.vertex_count();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        for u in 0..n as u32 {
            self.for_each_neighbor(u, |v| {
                if u < v {
                    adjacency[u as usize].push(v);
                }
            });
        }
        let labels: Vec<VertexLabel> = (0..n as u32)
            .map(|idx| {
                let (e, d) = self.vertex(idx);
                VertexLabel::Horoball {
                    coset: 0,
                    element: self.base.display(&self.width[e as usize]),
                    depth: d,
                }
            })
            .collect();
        let mut rim: Vec<u32> = Vec::new();
        let boundary_elems: Vec<bool> = self.boundary_elements();
        for idx in 0..n as u32 {
            let (e, d) = self.vertex(idx);
            if d == self.max_depth || boundary_elems[e as usize] {
                rim.push(idx);
            }
        }
        SpaceGraph::from_adjacency(adjacency, labels, rim)
    }

    /// Width elements with a base-generator neighbor outside the width set.
    fn boundary_elements(&self) -> Vec<bool> {
        let gens = self.base.generators();
        self.width
            .iter()
            .map(|g| {
                gens.iter().any(|s| {
                    let h = self.base.multiply(g, s);
                    !self.width_index.contains_key(&h)
                })
            })
            .collect()
    }

    // ---- truncation-exactness policy ----------------------------------

    /// Is a level-0 distance query between `p` and `q` certified exact?
    /// Ball widths use the radius rule (ball containing both elements plus a
    /// margin of the gap); general widths require the gap-balls to embed.
    /// Depth must reach the climb height `required_depth(gap) + 2`.
    pub fn certified_level0(&self, p: u32, q: u32) -> bool {
        self.certified_at_depth(p, q, 0)
    }

    pub fn certified_at_depth(&self, p: u32, q: u32, t: u32) -> bool {
        if p == q {
            return t + 2 <= self.max_depth;
        }
        let d = self.base_distance(p, q);
        let climb = required_depth(d as u64).max(t);
        if climb + 2 > self.max_depth {
            return false;
        }
        match self.width_radius {
            Some(r) => {
                let lp = self.base.word_length(&self.width[p as usize]);
                let lq = self.base.word_length(&self.width[q as usize]);
                lp.max(lq) + d as u64 <= r as u64
            }
            None => self.gap_ball_inside(p, d).unwrap_or(false)
                && self.gap_ball_inside(q, d).unwrap_or(false),
        }
    }

    fn gap_ball_inside(&self, p: u32, d: u32) -> Result<bool> {
        let ball = self
            .base
            .ball_bounded(&self.width[p as usize], d, self.width.len() * 4 + 16)?;
        Ok(ball.iter().all(|g| self.width_index.contains_key(g)))
    }

    /// All certified level-0 pairs `(i, j)`, `i < j`, as width indices.
    pub fn certified_level0_pairs(&self) -> Vec<(u32, u32)> {
        let n = self.width.len() as u32;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.certified_level0(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    // ---- measurements --------------------------------------------------

    /// Minimal `t` with `d((p,t), (q,t)) <= d_threshold`, using the vertical
    /// rays as the translated rays.
    pub fn measure_t0(
        &self,
        p: &GroupElement,
        q: &GroupElement,
        d_threshold: u32,
    ) -> Result<u32> {
        if d_threshold < 1 {
            return Err(Error::Input("threshold D must be >= 1".into()));
        }
        let pi = self
            .width_index_of(p)
            .ok_or_else(|| Error::Input("p not in width".into()))?;
        let qi = self
            .width_index_of(q)
            .ok_or_else(|| Error::Input("q not in width".into()))?;
        if pi == qi {
            return Err(Error::Input("p and q must be distinct".into()));
        }
        for t in 0..=self.max_depth {
            let d = self.distance(self.index(pi, t), self.index(qi, t));
            if d <= d_threshold {
                return Ok(t);
            }
        }
        Err(Error::InsufficientDepth {
            max_depth: self.max_depth,
            required: required_depth(self.base_distance(pi, qi) as u64),
        })
    }

    /// Deviation of the depth horofunction from the ray condition: over
    /// sampled pairs `(x, w)` with `w` within `5*delta_hat` of the vertical
    /// ray from `x`, the largest `| d(x,w) - (depth(w) - depth(x)) |`.
    pub fn check_horofunction(
        &self,
        delta_hat: f64,
        spec: SampleSpec,
    ) -> Result<HorofunctionCheckReport> {
        if spec.size == 0 {
            return Err(Error::EmptySample("horofunction check".into()));
        }
        let mut rng = sampling::rng(spec.seed);
        let n = self.vertex_count();
        let xs = sampling::sample_indices(n, spec.size, &mut rng);
        let reach = (5.0 * delta_hat).floor() as u32;
        let mut worst: i64 = 0;
        let mut pairs = 0usize;
        for &x in &xs {
            let x = x as u32;
            let (xe, xd) = self.vertex(x);
            let dist_x = self.distances_from(x);
            // Distance to the descending ray from x.
            let ray: Vec<u32> = (xd..=self.max_depth).map(|t| self.index(xe, t)).collect();
            let dist_ray = self.multi_source_distances(&ray);
            let candidates: Vec<u32> = (0..n as u32)
                .filter(|&w| w != x && dist_ray[w as usize] <= reach)
                .collect();
            let take = sampling::sample_indices(candidates.len(), 8, &mut rng);
            let mut picked: Vec<u32> = take.into_iter().map(|i| candidates[i]).collect();
            picked.sort_unstable();
            for w in picked {
                let (_, wd) = self.vertex(w);
                let drop = wd as i64 - xd as i64;
                let dev = (dist_x[w as usize] as i64 - drop).abs();
                worst = worst.max(dev);
                pairs += 1;
            }
        }
        if pairs == 0 {
            return Err(Error::EmptySample(
                "no pairs satisfied the ray-proximity hypothesis".into(),
            ));
        }
        Ok(HorofunctionCheckReport {
            d1_observed: worst as u32,
            pairs_checked: pairs,
            delta_hat,
            seed: spec.seed,
        })
    }

    fn multi_source_distances(&self, srcs: &[u32]) -> Vec<u32> {
        let n = self.vertex_count();
        let mut dist = vec![UNREACHED; n];
        let mut queue = VecDeque::new();
        for &s in srcs {
            if dist[s as usize] == UNREACHED {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            self.for_each_neighbor(u, |v| {
                if dist[v as usize] == UNREACHED {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            });
        }
        dist
    }

    /// Calibrate the asynchronous-to-synchronous constant `D(l)`: over
    /// sampled `(p, q, t)` with `(q,t)` within `l` of the vertical ray at
    /// `p`, the largest synchronous distance `d((q,t), (p,t))`.
    pub fn asynch_to_synch(&self, l: f64, spec: SampleSpec) -> Result<AsynchToSynchReport> {
        if spec.size == 0 {
            return Err(Error::EmptySample("asynch-to-synch calibration".into()));
        }
        let mut rng = sampling::rng(spec.seed);
        let pairs = sampling::sample_pairs(self.width.len(), spec.size, &mut rng);
        let mut d_observed = 0u32;
        let mut used = 0usize;
        for (p, q) in pairs {
            let (p, q) = (p as u32, q as u32);
            for t in 0..=self.max_depth {
                let from = self.distances_from(self.index(q, t));
                let to_ray = (0..=self.max_depth)
                    .map(|s| from[self.index(p, s) as usize])
                    .min()
                    .unwrap();
                if to_ray as f64 <= l {
                    let sync = from[self.index(p, t) as usize];
                    d_observed = d_observed.max(sync);
                    used += 1;
                }
            }
        }
        if used == 0 {
            return Err(Error::EmptySample(
                "no sampled point was within l of a translated ray".into(),
            ));
        }
        Ok(AsynchToSynchReport {
            d_observed,
            points_checked: used,
            l,
            seed: spec.seed,
        })
    }

    /// Over sampled certified level-0 pairs, compare the level-0 distance
    /// against twice the synchronization depth `t0`; the deviation is bounded
    /// by `f_bound` in the hyperbolic setting.
    pub fn approx_distance_check(
        &self,
        d_threshold: u32,
        f_bound: f64,
        spec: SampleSpec,
    ) -> Result<ApproxDistanceReport> {
        let pool = self.certified_level0_pairs();
        if pool.is_empty() {
            return Err(Error::EmptySample("no certified level-0 pairs".into()));
        }
        let mut rng = sampling::rng(spec.seed);
        let picks = sampling::sample_indices(pool.len(), spec.size, &mut rng);
        let mut max_abs_error = 0i64;
        let mut violations = 0usize;
        let mut pairs = 0usize;
        for i in picks {
            let (p, q) = pool[i];
            let t0 = self.measure_t0(
                &self.width()[p as usize].clone(),
                &self.width()[q as usize].clone(),
                d_threshold,
            )?;
            let d0 = self.distance(self.index(p, 0), self.index(q, 0));
            let err = (d0 as i64 - 2 * t0 as i64).abs();
            max_abs_error = max_abs_error.max(err);
            if err as f64 > f_bound {
                violations += 1;
            }
            pairs += 1;
        }
        Ok(ApproxDistanceReport {
            d_threshold,
            f_bound,
            max_abs_error: max_abs_error as u32,
            violations,
            pairs_checked: pairs,
            seed: spec.seed,
        })
    }

    /// Once two rays are within `d_hat` at some level, they stay within
    /// `d_hat` at every sampled deeper level past the settling depth.
    pub fn lowcenters_violations(
        &self,
        d_hat: u32,
        delta_hat: f64,
        spec: SampleSpec,
    ) -> Result<LowcentersReport> {
        let mut rng = sampling::rng(spec.seed);
        let pairs = sampling::sample_pairs(self.width.len(), spec.size, &mut rng);
        let settle = d_hat + (5.0 * delta_hat).ceil() as u32;
        let mut checked = 0usize;
        let mut violations = 0usize;
        for (p, q) in pairs {
            let (p, q) = (p as u32, q as u32);
            let mut t1 = None;
            for t in 0..=self.max_depth {
                let d = self.distance(self.index(p, t), self.index(q, t));
                if d <= d_hat {
                    t1 = Some(t);
                    break;
                }
            }
            let Some(t1) = t1 else { continue };
            for t in (t1 + settle)..=self.max_depth {
                let d = self.distance(self.index(p, t), self.index(q, t));
                checked += 1;
                if d > d_hat {
                    violations += 1;
                }
            }
        }
        Ok(LowcentersReport { checked, violations })
    }
}

fn line_index(base: &GroupModel, width: &[GroupElement]) -> Option<LineIndex> {
    if base.factors().len() != 1 || base.generator_count() != 1 {
        return None;
    }
    match base.factors()[0].kind {
        PrimitiveKind::Free { rank: 1 } | PrimitiveKind::FreeAbelian { rank: 1 } => {}
        _ => return None,
    }
    let mut value = Vec::with_capacity(width.len());
    for g in width {
        let v = match g.syllables() {
            [] => 0,
            [s] => s.exp,
            _ => return None,
        };
        value.push(v);
    }
    let mut by_value: Vec<(i64, u32)> = value
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    by_value.sort_unstable();
    Some(LineIndex { value, by_value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_horoball(width: u32, depth: u32) -> HoroballTruncation {
        let z = GroupModel::free_abelian(1)
            .unwrap()
            .with_radius_cap(width.max(12));
        HoroballTruncation::over_ball(
            &z,
            HoroballParams { width_radius: width, max_depth: depth },
            &ResourceCaps::default(),
        )
        .unwrap()
    }

    fn z_vertex(h: &HoroballTruncation, v: i64, depth: u32) -> u32 {
        let g = h.base().parse_word(&format!("a^{v}")).unwrap();
        h.vertex_of(&HoroVertex { element: g, depth }).unwrap()
    }

    #[test]
    fn horizontal_range_table() {
        let expected: [u64; 13] = [
            1, 2, 7, 20, 54, 148, 403, 1096, 2980, 8103, 22026, 59874, 162754,
        ];
        for (n, &want) in expected.iter().enumerate() {
            let got = horizontal_range(n as u32);
            assert_eq!(got, want, "floor(e^{n})");
            // Independent check: ln(got) <= n < ln(got + 1).
            assert!((got as f64).ln() <= n as f64 + 1e-12);
            assert!(((got + 1) as f64).ln() > n as f64);
        }
    }

    #[test]
    fn vertex_count_over_z() {
        let h = z_horoball(3, 2);
        assert_eq!(h.vertex_count(), 21);
    }

    #[test]
    fn level_one_adjacency_threshold() {
        let h = z_horoball(5, 2);
        let a = z_vertex(&h, 0, 1);
        let b = z_vertex(&h, 2, 1);
        let c = z_vertex(&h, 3, 1);
        assert_eq!(h.distance(a, b), 1, "(0,1)-(2,1) adjacent: 2 <= floor(e) = 2");
        assert!(h.distance(a, c) > 1, "(0,1)-(3,1) not adjacent: 3 > 2");
    }

    #[test]
    fn vertical_distance_is_depth_difference() {
        let h = z_horoball(4, 6);
        let u = z_vertex(&h, 2, 1);
        let v = z_vertex(&h, 2, 5);
        assert_eq!(h.distance(u, v), 4);
    }

    #[test]
    fn spot_distances_on_z() {
        let h = z_horoball(20, 5);
        assert_eq!(h.distance(z_vertex(&h, 0, 0), z_vertex(&h, 3, 0)), 3);
        assert_eq!(h.distance(z_vertex(&h, 0, 0), z_vertex(&h, 10, 0)), 6);
    }

    #[test]
    fn t0_measurement_on_z() {
        let h = z_horoball(20, 5);
        let p = h.base().parse_word("e").unwrap();
        let q = h.base().parse_word("a^10").unwrap();
        assert_eq!(h.measure_t0(&p, &q, 1).unwrap(), 3);
        let q1 = h.base().parse_word("a").unwrap();
        assert_eq!(h.measure_t0(&p, &q1, 1).unwrap(), 0);
    }

    #[test]
    fn t0_insufficient_depth_names_requirement() {
        let h = z_horoball(20, 1);
        let p = h.base().parse_word("e").unwrap();
        let q = h.base().parse_word("a^15").unwrap();
        match h.measure_t0(&p, &q, 1) {
            Err(Error::InsufficientDepth { required, .. }) => assert_eq!(required, 3),
            other => panic!("expected InsufficientDepth, got {other:?}"),
        }
    }

    #[test]
    fn horofunction_examples() {
        let h = z_horoball(6, 5);
        let x = z_vertex(&h, 0, 0);
        let w = z_vertex(&h, 0, 4);
        let dev = (h.distance(x, w) as i64 - 4).abs();
        assert_eq!(dev, 0);
        let w2 = z_vertex(&h, 1, 4);
        assert_eq!(h.distance(x, w2), 5);
        let dev2 = (h.distance(x, w2) as i64 - 4).abs();
        assert_eq!(dev2, 1);
        assert_eq!(h.depth_horofunction(w), -4);
        assert_eq!(h.depth_horofunction(x), 0);
    }

    #[test]
    fn certification_policy() {
        let h = z_horoball(20, 5);
        let p = h.width_index_of(&h.base().parse_word("e").unwrap()).unwrap();
        let q = h.width_index_of(&h.base().parse_word("a^10").unwrap()).unwrap();
        // gap 10: climb ceil(ln 10) = 3, need depth 5; max(0,10)+10 <= 20.
        assert!(h.certified_level0(p, q));
        let far = h.width_index_of(&h.base().parse_word("a^15").unwrap()).unwrap();
        assert!(!h.certified_level0(p, far));
        let h_shallow = z_horoball(20, 4);
        assert!(!h_shallow.certified_level0(p, q));
    }
}
