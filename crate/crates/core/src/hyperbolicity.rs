//! Gromov products, four-point and thin-triangle hyperbolicity constants,
//! approximate centers, equiradial points, and visual-metric estimates.
//!
//! Distances are integers, so Gromov products are half-integers; all product
//! arithmetic is done on doubled values to stay exact, and converted to f64
//! only at report boundaries.

use crate::error::{Error, Result};
use crate::sampling;
use crate::space::{DistanceMatrix, SpaceGraph, UNREACHED};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub mode: DeltaMode,
    pub delta_fourpoint: f64,
    pub quadruples_evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub witness: [u32; 4],
    pub witness_labels: [String; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin_triangle_delta: Option<u32>,
    /// Minimum over evaluated quadruples of the Gromov-inequality slack at
    /// the reported delta; zero by construction, recorded for re-checking.
    pub gromov_inequality_min_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinTriangleReport {
    pub delta: u32,
    pub triangles_evaluated: usize,
    pub seed: u64,
    /// `(x, y, z, t)` attaining the maximum.
    pub witness: [u32; 4],
}

/// Doubled Gromov product `2 (y|z)_x` from the three pairwise distances.
pub fn gromov_product_doubled(dxy: u32, dxz: u32, dyz: u32) -> i64 {
    dxy as i64 + dxz as i64 - dyz as i64
}

/// `(y|z)_x` on a graph, by three BFS runs.
pub fn gromov_product(g: &SpaceGraph, x: u32, y: u32, z: u32) -> f64 {
    let from_x = g.bfs(x);
    let from_y = g.bfs(y);
    gromov_product_doubled(from_x[y as usize], from_x[z as usize], from_y[z as usize]) as f64 / 2.0
}

/// Defect of one quadruple: the largest pairing sum minus the middle one,
/// halved. Equals the maximum over basepoint/pair labelings of
/// `min{(u|w)_x, (v|w)_x} - (u|v)_x`, doubled.
fn quadruple_defect_doubled(d: &DistanceMatrix, q: [u32; 4]) -> i64 {
    let [a, b, c, e] = q;
    let s1 = d.get(a, b) as i64 + d.get(c, e) as i64;
    let s2 = d.get(a, c) as i64 + d.get(b, e) as i64;
    let s3 = d.get(a, e) as i64 + d.get(b, c) as i64;
    let hi = s1.max(s2).max(s3);
    let lo = s1.min(s2).min(s3);
    let mid = s1 + s2 + s3 - hi - lo;
    hi - mid
}

pub struct DeltaParams {
    pub mode: DeltaMode,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
    pub exact_cutoff: usize,
}

impl DeltaParams {
    pub fn exact() -> Self {
        DeltaParams {
            mode: DeltaMode::Exact,
            sample_size: None,
            seed: None,
            exact_cutoff: crate::caps::ResourceCaps::default().exact_delta_cutoff,
        }
    }

    pub fn sampled(sample_size: usize, seed: u64) -> Self {
        DeltaParams {
            mode: DeltaMode::Sampled,
            sample_size: Some(sample_size),
            seed: Some(seed),
            exact_cutoff: crate::caps::ResourceCaps::default().exact_delta_cutoff,
        }
    }
}

/// Four-point hyperbolicity constant. Exact mode maximizes the defect over
/// all vertex quadruples; sampled mode over seeded quadruples (a lower bound
/// for the exact value on the same graph).
pub fn four_point_delta(g: &SpaceGraph, params: &DeltaParams) -> Result<DeltaReport> {
    let n = g.vertex_count();
    if n < 4 {
        return Err(Error::Input("four-point delta needs at least 4 vertices".into()));
    }
    match params.mode {
        DeltaMode::Exact => {
            if n > params.exact_cutoff {
                return Err(Error::ExactModeRefused {
                    vertices: n,
                    cutoff: params.exact_cutoff,
                });
            }
            let d = g.all_pairs();
            // Parallel over the first index; ties resolve to the lexically
            // smallest witness so the reduction is order-independent.
            let best = (0..n as u32 - 3)
                .into_par_iter()
                .map(|i| {
                    let mut local: (i64, [u32; 4]) = (i64::MIN, [0; 4]);
                    for j in (i + 1)..n as u32 {
                        for k in (j + 1)..n as u32 {
                            for l in (k + 1)..n as u32 {
                                let q = [i, j, k, l];
                                let def = quadruple_defect_doubled(&d, q);
                                if def > local.0 {
                                    local = (def, q);
                                }
                            }
                        }
                    }
                    local
                })
                .reduce(
                    || (i64::MIN, [0; 4]),
                    |a, b| match a.0.cmp(&b.0) {
                        std::cmp::Ordering::Greater => a,
                        std::cmp::Ordering::Less => b,
                        std::cmp::Ordering::Equal => {
                            if a.1 <= b.1 {
                                a
                            } else {
                                b
                            }
                        }
                    },
                );
            let delta_doubled = best.0.max(0);
            Ok(DeltaReport {
                mode: DeltaMode::Exact,
                delta_fourpoint: delta_doubled as f64 / 2.0,
                quadruples_evaluated: sampling::choose4(n) as u64,
                sample_size: None,
                seed: None,
                witness: best.1,
                witness_labels: witness_labels(g, best.1),
                thin_triangle_delta: None,
                gromov_inequality_min_slack: 0.0,
            })
        }
        DeltaMode::Sampled => {
            let size = params
                .sample_size
                .ok_or_else(|| Error::Input("sampled mode needs sample_size".into()))?;
            let seed = params
                .seed
                .ok_or_else(|| Error::Input("sampled mode needs a seed".into()))?;
            if size == 0 {
                return Err(Error::EmptySample("four-point delta".into()));
            }
            let mut rng = sampling::rng(seed);
            let quads: Vec<[usize; 4]> = sampling::sample_quadruples(n, size, &mut rng);
            // BFS only from vertices that occur in the sample.
            let mut sources: Vec<u32> = quads.iter().flatten().map(|&v| v as u32).collect();
            sources.sort_unstable();
            sources.dedup();
            let rows: Vec<Vec<u32>> =
                sources.par_iter().map(|&s| g.bfs(s)).collect();
            let row_of = |v: u32| -> &Vec<u32> {
                &rows[sources.binary_search(&v).expect("source present")]
            };
            let best = quads
                .par_iter()
                .map(|q| {
                    let q = [q[0] as u32, q[1] as u32, q[2] as u32, q[3] as u32];
                    let [a, b, c, e] = q;
                    let ra = row_of(a);
                    let rb = row_of(b);
                    let rc = row_of(c);
                    let s1 = ra[b as usize] as i64 + rc[e as usize] as i64;
                    let s2 = ra[c as usize] as i64 + rb[e as usize] as i64;
                    let s3 = ra[e as usize] as i64 + rb[c as usize] as i64;
                    let hi = s1.max(s2).max(s3);
                    let lo = s1.min(s2).min(s3);
                    (hi - (s1 + s2 + s3 - hi - lo), q)
                })
                .reduce(
                    || (i64::MIN, [0; 4]),
                    |a, b| match a.0.cmp(&b.0) {
                        std::cmp::Ordering::Greater => a,
                        std::cmp::Ordering::Less => b,
                        std::cmp::Ordering::Equal => {
                            if a.1 <= b.1 {
                                a
                            } else {
                                b
                            }
                        }
                    },
                );
            let delta_doubled = best.0.max(0);
            Ok(DeltaReport {
                mode: DeltaMode::Sampled,
                delta_fourpoint: delta_doubled as f64 / 2.0,
                quadruples_evaluated: quads.len() as u64,
                sample_size: Some(size),
                seed: Some(seed),
                witness: best.1,
                witness_labels: witness_labels(g, best.1),
                thin_triangle_delta: None,
                gromov_inequality_min_slack: 0.0,
            })
        }
    }
}

fn witness_labels(g: &SpaceGraph, w: [u32; 4]) -> [String; 4] {
    [
        g.label(w[0]).display(),
        g.label(w[1]).display(),
        g.label(w[2]).display(),
        g.label(w[3]).display(),
    ]
}

/// Thin-triangle constant: over sampled triangles `(x,y,z)` with chosen
/// geodesics and every parameter `t <= (y|z)_x`, the largest `d(y', z')`
/// where `y'`, `z'` sit at distance `t` from `x` on the two sides.
pub fn thin_triangle_delta(g: &SpaceGraph, sample_size: usize, seed: u64) -> Result<ThinTriangleReport> {
    let n = g.vertex_count();
    if n < 3 || sample_size == 0 {
        return Err(Error::Input("thin-triangle delta needs >= 3 vertices and a sample".into()));
    }
    let mut rng = sampling::rng(seed);
    let triples = sampling::sample_triples(n, sample_size, &mut rng);
    let mut best: (u32, [u32; 4]) = (0, [0; 4]);
    for t in &triples {
        let (x, y, z) = (t[0] as u32, t[1] as u32, t[2] as u32);
        let from_x = g.bfs(x);
        let from_y = g.bfs(y);
        let prod2 = gromov_product_doubled(
            from_x[y as usize],
            from_x[z as usize],
            from_y[z as usize],
        );
        if prod2 < 0 {
            continue;
        }
        let side_y = g.geodesic_from_dist(&from_x, y);
        let side_z = g.geodesic_from_dist(&from_x, z);
        let tmax = (prod2 / 2) as usize;
        for tt in 0..=tmax.min(side_y.len() - 1).min(side_z.len() - 1) {
            let yp = side_y[tt];
            let zp = side_z[tt];
            let d = g.distance(yp, zp);
            // First witness in sample order wins ties; deterministic.
            if d > best.0 {
                best = (d, [x, y, z, tt as u32]);
            }
        }
    }
    Ok(ThinTriangleReport {
        delta: best.0,
        triangles_evaluated: triples.len(),
        seed,
        witness: best.1,
    })
}

/// Smallest-index vertex whose `L`-ball meets all three sides of the chosen
/// geodesic triangle on `x, y, z`, if any.
pub fn approximate_center(g: &SpaceGraph, x: u32, y: u32, z: u32, l: u32) -> Option<u32> {
    let from_x = g.bfs(x);
    let from_y = g.bfs(y);
    let side_xy = g.geodesic_from_dist(&from_x, y);
    let side_xz = g.geodesic_from_dist(&from_x, z);
    let side_yz = g.geodesic_from_dist(&from_y, z);
    let d_xy = g.bfs_multi(&side_xy);
    let d_xz = g.bfs_multi(&side_xz);
    let d_yz = g.bfs_multi(&side_yz);
    (0..g.vertex_count() as u32).find(|&w| {
        d_xy[w as usize] <= l && d_xz[w as usize] <= l && d_yz[w as usize] <= l
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquiradialPoints {
    /// On `[y,z]`, at parameter `floor((z|x)_y)` from `y`.
    pub p_x: u32,
    /// On `[x,z]`, at parameter `floor((y|z)_x)` from `x`.
    pub p_y: u32,
    /// On `[x,y]`, at parameter `floor((y|z)_x)` from `x`.
    pub p_z: u32,
}

/// Rounded equiradial points of the chosen geodesic triangle; each lies
/// within 1/2 of its real-valued arc parameter.
pub fn equiradial_points(g: &SpaceGraph, x: u32, y: u32, z: u32) -> EquiradialPoints {
    let from_x = g.bfs(x);
    let from_y = g.bfs(y);
    let dxy = from_x[y as usize];
    let dxz = from_x[z as usize];
    let dyz = from_y[z as usize];
    let side_xy = g.geodesic_from_dist(&from_x, y);
    let side_xz = g.geodesic_from_dist(&from_x, z);
    let side_yz = g.geodesic_from_dist(&from_y, z);
    let yz_x = gromov_product_doubled(dxy, dxz, dyz).max(0) as usize / 2;
    let zx_y = gromov_product_doubled(dxy, dyz, dxz).max(0) as usize / 2;
    EquiradialPoints {
        p_x: side_yz[zx_y.min(side_yz.len() - 1)],
        p_y: side_xz[yz_x.min(side_xz.len() - 1)],
        p_z: side_xy[yz_x.min(side_xy.len() - 1)],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VisualPair {
    pub u: u32,
    pub v: u32,
    pub product: f64,
    /// `a^(-(u|v)_w)`.
    pub value: f64,
    /// Chain (min-plus) metric over the sampled direction set.
    pub estimated_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VisualEstimate {
    pub basepoint: u32,
    pub parameter_a: f64,
    pub horizon: u32,
    pub c1: f64,
    pub c2: f64,
    pub gauge_spread: f64,
    pub pairs: Vec<VisualPair>,
}

/// Visual-metric estimate over a finite direction sample: tabulates
/// `a^(-(u|v)_w)` and compares it against the largest metric it dominates
/// (the min-plus chain closure), reporting the fitted frame `c1 <= c2`.
pub fn visual_estimate(
    g: &SpaceGraph,
    w: u32,
    a: f64,
    directions: &[u32],
    horizon: u32,
) -> Result<VisualEstimate> {
    if a <= 1.0 {
        return Err(Error::Input("visual parameter a must be > 1".into()));
    }
    let k = directions.len();
    if k < 2 {
        return Err(Error::Input("visual estimate needs at least two directions".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for &d in directions {
        if !seen.insert(d) {
            return Err(Error::Input("directions must be pairwise distinct".into()));
        }
    }
    let from_w = g.bfs(w);
    for &d in directions {
        let dist = from_w[d as usize];
        if dist == UNREACHED || dist < horizon {
            return Err(Error::Input(format!(
                "direction {d} is at distance {dist} from the basepoint, below the horizon {horizon}"
            )));
        }
    }
    let rows: Vec<Vec<u32>> = directions.iter().map(|&u| g.bfs(u)).collect();
    let mut value = vec![0.0f64; k * k];
    let mut prod = vec![0.0f64; k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let p2 = gromov_product_doubled(
                from_w[directions[i] as usize],
                from_w[directions[j] as usize],
                rows[i][directions[j] as usize],
            );
            let p = p2 as f64 / 2.0;
            let v = a.powf(-p);
            prod[i * k + j] = p;
            prod[j * k + i] = p;
            value[i * k + j] = v;
            value[j * k + i] = v;
        }
    }
    // Min-plus closure: the largest metric dominated by the value table.
    let mut chain = value.clone();
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let via = chain[i * k + m] + chain[m * k + j];
                if m != i && m != j && via < chain[i * k + j] {
                    chain[i * k + j] = via;
                }
            }
        }
    }
    let mut c1 = f64::INFINITY;
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let ratio = chain[i * k + j] / value[i * k + j];
            c1 = c1.min(ratio);
            pairs.push(VisualPair {
                u: directions[i],
                v: directions[j],
                product: prod[i * k + j],
                value: value[i * k + j],
                estimated_distance: chain[i * k + j],
            });
        }
    }
    let c2 = 1.0;
    Ok(VisualEstimate {
        basepoint: w,
        parameter_a: a,
        horizon,
        c1,
        c2,
        gauge_spread: c2 / c1,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupModel;

    #[test]
    fn product_examples() {
        // (x|z)_x = 0.
        let c4 = SpaceGraph::cycle(4);
        assert_eq!(gromov_product(&c4, 0, 0, 2), 0.0);
        // C4: (v2|v3)_(v0) = (2 + 1 - 1)/2 = 1.
        assert_eq!(gromov_product(&c4, 0, 2, 3), 1.0);
        // Free(2) tree: (a^2 | a*b)_e = 1 (shared prefix a).
        let f2 = GroupModel::free(2).unwrap();
        let (g, ball) = SpaceGraph::cayley_ball(&f2, 2).unwrap();
        let find = |t: &str| {
            let e = f2.parse_word(t).unwrap();
            ball.iter().position(|x| *x == e).unwrap() as u32
        };
        assert_eq!(gromov_product(&g, find("e"), find("a^2"), find("a*b")), 1.0);
    }

    #[test]
    fn tree_is_zero_hyperbolic_and_c4_is_one() {
        let f2 = GroupModel::free(2).unwrap();
        let (g, _) = SpaceGraph::cayley_ball(&f2, 3).unwrap();
        let r = four_point_delta(&g, &DeltaParams::exact()).unwrap();
        assert_eq!(r.delta_fourpoint, 0.0);
        let c4 = SpaceGraph::cycle(4);
        let r = four_point_delta(&c4, &DeltaParams::exact()).unwrap();
        assert_eq!(r.delta_fourpoint, 1.0);
        assert_eq!(r.witness, [0, 1, 2, 3]);
    }

    #[test]
    fn exact_cutoff_is_enforced() {
        let f2 = GroupModel::free(2).unwrap();
        let (g, _) = SpaceGraph::cayley_ball(&f2, 5).unwrap(); // 485 vertices
        let err = four_point_delta(&g, &DeltaParams::exact()).unwrap_err();
        assert!(matches!(err, Error::ExactModeRefused { .. }));
    }

    #[test]
    fn sampled_is_a_lower_bound() {
        let c8 = SpaceGraph::cycle(8);
        let exact = four_point_delta(&c8, &DeltaParams::exact()).unwrap();
        let sampled = four_point_delta(&c8, &DeltaParams::sampled(20, 11)).unwrap();
        assert!(sampled.delta_fourpoint <= exact.delta_fourpoint);
    }

    #[test]
    fn thin_triangles_on_trees_and_c4() {
        let tripod = SpaceGraph::tripod(3, 4);
        let r = thin_triangle_delta(&tripod, 10_000, 3).unwrap();
        assert_eq!(r.delta, 0);
        let c4 = SpaceGraph::cycle(4);
        let r = thin_triangle_delta(&c4, 10_000, 3).unwrap();
        assert_eq!(r.delta, 2, "antipodal split");
    }

    #[test]
    fn centers_and_equiradial_points_on_a_tripod() {
        let t = SpaceGraph::tripod(3, 5);
        let tip = |leg: usize| (leg * 5 + 5) as u32;
        // Branch vertex 0 is on all three sides.
        assert_eq!(approximate_center(&t, tip(0), tip(1), tip(2), 0), Some(0));
        let eq = equiradial_points(&t, tip(0), tip(1), tip(2));
        assert_eq!((eq.p_x, eq.p_y, eq.p_z), (0, 0, 0));
        // Degenerate triangle.
        assert_eq!(approximate_center(&t, 3, 3, 3, 0), Some(3));
    }

    #[test]
    fn equiradial_degenerate_x_equals_y() {
        let p = SpaceGraph::path(7);
        let eq = equiradial_points(&p, 1, 1, 5);
        // (y|z)_x = 0, so p_z = x.
        assert_eq!(eq.p_z, 1);
    }

    #[test]
    fn visual_values_in_a_tree() {
        let t = SpaceGraph::tripod(3, 6);
        let tips = [6u32, 12, 18];
        let est = visual_estimate(&t, 0, 2.0, &tips, 5).unwrap();
        // All products are 0 at the branch point: values 2^0 = 1.
        for p in &est.pairs {
            assert_eq!(p.product, 0.0);
            assert_eq!(p.value, 1.0);
        }
        assert_eq!(est.c1, 1.0);
        assert_eq!(est.gauge_spread, 1.0);
    }
}
