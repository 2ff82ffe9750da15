//! Finite-scale signatures of uniformly perfect boundaries: the equilateral
//! triple scan and the far-triple center criterion.
//!
//! The equilateral scan searches balls `B(w, R)` for triples whose pairwise
//! Gromov products (based at the third point) are all large relative to `R`;
//! `mu_best` is the best achievable fraction. The center criterion replaces
//! ideal triangles by triples of vertices beyond a far horizon and asks for
//! the least `L` such that some such triple has all three sides meeting
//! `B(x, L)`.

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::hyperbolicity::gromov_product_doubled;
use crate::sampling;
use crate::space::{SpaceGraph, UNREACHED};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// Exhaustive when the ball is small, sampled otherwise.
    Auto,
    /// Exhaustive; refused above the hard budget.
    Exact,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct EquilateralParams {
    pub basepoints: Vec<u32>,
    pub radii: Vec<u32>,
    pub mode: ScanMode,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfectionRow {
    pub basepoint: u32,
    pub radius: u32,
    pub ball_size: usize,
    /// Best over triples of (min pairwise product) / R.
    pub mu_best: f64,
    pub witness: [u32; 3],
    pub mode: &'static str,
    /// The ball reaches within R of the truncation rim; distances near the
    /// rim may be truncation artifacts.
    pub escaped_certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfectionReport {
    pub rows: Vec<PerfectionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn equilateral_scan(
    g: &SpaceGraph,
    params: &EquilateralParams,
    caps: &ResourceCaps,
) -> Result<PerfectionReport> {
    let rim_dist = if g.rim().is_empty() {
        None
    } else {
        Some(g.bfs_multi(g.rim()))
    };
    let mut rows = Vec::new();
    for &w in &params.basepoints {
        let dist_w = g.bfs(w);
        for &radius in &params.radii {
            if radius < 2 {
                return Err(Error::Input("equilateral scan needs R >= 2".into()));
            }
            let ball: Vec<u32> = (0..g.vertex_count() as u32)
                .filter(|&v| dist_w[v as usize] <= radius)
                .collect();
            if ball.len() < 3 {
                return Err(Error::Input(format!(
                    "ball B({w},{radius}) has fewer than 3 vertices"
                )));
            }
            let exhaustive = match params.mode {
                ScanMode::Exact => {
                    if ball.len() > caps.equilateral_exact_budget {
                        return Err(Error::ExactModeRefused {
                            vertices: ball.len(),
                            cutoff: caps.equilateral_exact_budget,
                        });
                    }
                    true
                }
                ScanMode::Auto => ball.len() <= caps.equilateral_auto_cutoff,
                ScanMode::Sampled => false,
            };
            // Pairwise global distances between ball members.
            let b = ball.len();
            let rows_d: Vec<Vec<u32>> = ball.par_iter().map(|&v| g.bfs(v)).collect();
            let mut d = vec![0u32; b * b];
            for i in 0..b {
                for j in 0..b {
                    d[i * b + j] = rows_d[i][ball[j] as usize];
                }
            }
            let score = |i: usize, j: usize, k: usize| -> i64 {
                let dij = d[i * b + j];
                let dik = d[i * b + k];
                let djk = d[j * b + k];
                let p_k = gromov_product_doubled(dik, djk, dij); // (i|j)_k
                let p_j = gromov_product_doubled(dij, djk, dik); // (i|k)_j
                let p_i = gromov_product_doubled(dij, dik, djk); // (j|k)_i
                p_i.min(p_j).min(p_k)
            };
            let (best, witness, mode_name) = if exhaustive {
                let best = (0..b)
                    .into_par_iter()
                    .map(|i| {
                        let mut local: (i64, [usize; 3]) = (i64::MIN, [0; 3]);
                        for j in (i + 1)..b {
                            for k in (j + 1)..b {
                                let s = score(i, j, k);
                                if s > local.0 {
                                    local = (s, [i, j, k]);
                                }
                            }
                        }
                        local
                    })
                    .reduce(
                        || (i64::MIN, [0; 3]),
                        |x, y| match x.0.cmp(&y.0) {
                            std::cmp::Ordering::Greater => x,
                            std::cmp::Ordering::Less => y,
                            std::cmp::Ordering::Equal => {
                                if x.1 <= y.1 {
                                    x
                                } else {
                                    y
                                }
                            }
                        },
                    );
                (best.0, best.1, "exact")
            } else {
                let size = params
                    .sample_size
                    .ok_or_else(|| Error::Input("sampled scan needs sample_size".into()))?;
                let seed = params
                    .seed
                    .ok_or_else(|| Error::Input("sampled scan needs a seed".into()))?;
                let mut rng = sampling::rng(seed);
                let triples = sampling::sample_triples(b, size, &mut rng);
                let mut local: (i64, [usize; 3]) = (i64::MIN, [0; 3]);
                for t in triples {
                    let s = score(t[0], t[1], t[2]);
                    if s > local.0 {
                        local = (s, t);
                    }
                }
                (local.0, local.1, "sampled")
            };
            let escaped = rim_dist
                .as_ref()
                .map(|rd| rd[w as usize] <= radius)
                .unwrap_or(false);
            rows.push(PerfectionRow {
                basepoint: w,
                radius,
                ball_size: b,
                mu_best: best.max(0) as f64 / (2.0 * radius as f64),
                witness: [
                    ball[witness[0]],
                    ball[witness[1]],
                    ball[witness[2]],
                ],
                mode: mode_name,
                escaped_certified: escaped,
            });
        }
    }
    Ok(PerfectionReport { rows, seed: params.seed })
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterRow {
    pub vertex: u32,
    /// Least `L <= l_max` admitting a far triple with all three sides
    /// meeting `B(vertex, L)`; `None` if there is none.
    pub min_l: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterCriterionReport {
    pub far_horizon: u32,
    pub l_max: u32,
    pub rows: Vec<CenterRow>,
    /// Max of `min_l` when every sampled vertex admits one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_fit: Option<u32>,
}

/// For each sampled vertex, the least `L` such that some triple of vertices
/// at distance >= `far_horizon` spans a geodesic triangle whose three sides
/// all meet `B(x, L)`. Meaningful as an ideal-triangle proxy only for
/// `l_max < far_horizon`; otherwise near-degenerate triples qualify.
pub fn center_criterion(
    g: &SpaceGraph,
    vertices: &[u32],
    far_horizon: u32,
    l_max: u32,
) -> Result<CenterCriterionReport> {
    if vertices.is_empty() {
        return Err(Error::EmptySample("center criterion".into()));
    }
    let mut rows = Vec::with_capacity(vertices.len());
    for &x in vertices {
        let dist_x = g.bfs(x);
        let far: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| dist_x[v as usize] != UNREACHED && dist_x[v as usize] >= far_horizon)
            .collect();
        if far.len() < 3 {
            rows.push(CenterRow { vertex: x, min_l: None });
            continue;
        }
        let f = far.len();
        // m[u][v]: distance from x to the deterministic geodesic [u, v].
        let m_rows: Vec<Vec<u32>> = far
            .par_iter()
            .enumerate()
            .map(|(i, &u)| {
                let dist_u = g.bfs(u);
                let mut out = vec![0u32; f];
                for (j, &v) in far.iter().enumerate() {
                    if j <= i {
                        continue;
                    }
                    let path = g.geodesic_from_dist(&dist_u, v);
                    out[j] = path
                        .iter()
                        .map(|&p| dist_x[p as usize])
                        .min()
                        .unwrap_or(UNREACHED);
                }
                out
            })
            .collect();
        let m = |i: usize, j: usize| -> u32 {
            if i < j {
                m_rows[i][j]
            } else {
                m_rows[j][i]
            }
        };
        let mut found = None;
        'levels: for l in 0..=l_max {
            // Triangle in the graph on far vertices with edges m <= l.
            let words = f.div_ceil(64);
            let mut adj = vec![0u64; f * words];
            for i in 0..f {
                for j in (i + 1)..f {
                    if m(i, j) <= l {
                        adj[i * words + j / 64] |= 1 << (j % 64);
                        adj[j * words + i / 64] |= 1 << (i % 64);
                    }
                }
            }
            for i in 0..f {
                for j in (i + 1)..f {
                    if m(i, j) > l {
                        continue;
                    }
                    let ri = &adj[i * words..(i + 1) * words];
                    let rj = &adj[j * words..(j + 1) * words];
                    if ri.iter().zip(rj).any(|(a, b)| a & b != 0) {
                        found = Some(l);
                        break 'levels;
                    }
                }
            }
        }
        rows.push(CenterRow { vertex: x, min_l: found });
    }
    let k_fit = if rows.iter().all(|r| r.min_l.is_some()) {
        rows.iter().map(|r| r.min_l.unwrap()).max()
    } else {
        None
    };
    Ok(CenterCriterionReport {
        far_horizon,
        l_max,
        rows,
        k_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupModel;

    #[test]
    fn tree_balls_are_equilateral() {
        let f2 = GroupModel::free(2).unwrap();
        let (g, _) = SpaceGraph::cayley_ball(&f2, 4).unwrap();
        let report = equilateral_scan(
            &g,
            &EquilateralParams {
                basepoints: vec![0],
                radii: vec![4],
                mode: ScanMode::Exact,
                sample_size: None,
                seed: None,
            },
            &ResourceCaps::default(),
        )
        .unwrap();
        assert_eq!(report.rows[0].mu_best, 1.0);
    }

    #[test]
    fn path_triples_degenerate() {
        // Collinear triples have a vanishing middle-based product.
        let g = SpaceGraph::path(21);
        let report = equilateral_scan(
            &g,
            &EquilateralParams {
                basepoints: vec![10],
                radii: vec![4],
                mode: ScanMode::Exact,
                sample_size: None,
                seed: None,
            },
            &ResourceCaps::default(),
        )
        .unwrap();
        assert_eq!(report.rows[0].mu_best, 0.0);
        assert!(!report.rows[0].escaped_certified);
    }

    #[test]
    fn center_criterion_on_tripod_and_path() {
        let t = SpaceGraph::tripod(3, 6);
        let r = center_criterion(&t, &[0], 4, 3).unwrap();
        assert_eq!(r.rows[0].min_l, Some(0), "branch point is a 0-center");
        assert_eq!(r.k_fit, Some(0));
        // A line has only two directions: any far triple has two points on
        // one side, whose geodesic stays beyond the horizon. Meaningful for
        // l_max < far_horizon.
        let p = SpaceGraph::path(31);
        let r = center_criterion(&p, &[15], 4, 3).unwrap();
        assert_eq!(r.rows[0].min_l, None);
        assert_eq!(r.k_fit, None);
    }
}
