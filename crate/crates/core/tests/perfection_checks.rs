//! Perfection-scan checks: an exhaustive triple oracle on small graphs,
//! tree positivity, line degeneracy, and the center-criterion behaviour on
//! horoball depth.

use cusped_core::caps::ResourceCaps;
use cusped_core::cusped::{CuspedParams, CuspedTruncation, SpaceVertex};
use cusped_core::groups::{GroupModel, GroupPair};
use cusped_core::perfection::{center_criterion, equilateral_scan, EquilateralParams, ScanMode};
use cusped_core::space::SpaceGraph;

fn exact_params(basepoints: Vec<u32>, radii: Vec<u32>) -> EquilateralParams {
    EquilateralParams {
        basepoints,
        radii,
        mode: ScanMode::Exact,
        sample_size: None,
        seed: None,
    }
}

/// Brute-force mu_best over all triples using Floyd-Warshall distances;
/// independent of the library's scan.
#[allow(clippy::needless_range_loop)]
fn mu_oracle(g: &SpaceGraph, w: u32, radius: u32) -> f64 {
    let n = g.vertex_count();
    const INF: u32 = u32::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
    }
    for (u, v) in g.edges() {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let ball: Vec<usize> = (0..n).filter(|&v| d[w as usize][v] <= radius).collect();
    let mut best = 0i64;
    for (ai, &a) in ball.iter().enumerate() {
        for (bi, &b) in ball.iter().enumerate().skip(ai + 1) {
            for &c in ball.iter().skip(bi + 1) {
                let p_c = d[c][a] as i64 + d[c][b] as i64 - d[a][b] as i64;
                let p_b = d[b][a] as i64 + d[b][c] as i64 - d[a][c] as i64;
                let p_a = d[a][b] as i64 + d[a][c] as i64 - d[b][c] as i64;
                best = best.max(p_a.min(p_b).min(p_c));
            }
        }
    }
    best.max(0) as f64 / (2.0 * radius as f64)
}

#[test]
fn scan_matches_triple_oracle_on_small_graphs() {
    for (g, w, r) in [
        (SpaceGraph::cycle(8), 0u32, 3u32),
        (SpaceGraph::path(13), 6, 4),
        (SpaceGraph::tripod(3, 5), 0, 4),
    ] {
        let lib = equilateral_scan(&g, &exact_params(vec![w], vec![r]), &ResourceCaps::default())
            .unwrap();
        assert_eq!(lib.rows[0].mu_best, mu_oracle(&g, w, r), "graph mismatch");
    }
}

#[test]
fn trees_attain_mu_one() {
    let f2 = GroupModel::free(2).unwrap();
    let (g, _) = SpaceGraph::cayley_ball(&f2, 5).unwrap();
    let caps = ResourceCaps { equilateral_exact_budget: 2_000, ..Default::default() };
    let report =
        equilateral_scan(&g, &exact_params(vec![0], vec![3, 4, 5]), &caps).unwrap();
    for row in &report.rows {
        assert_eq!(row.mu_best, 1.0, "R = {}", row.radius);
        // The witness re-evaluates: min pairwise product equals R.
        let [a, b, c] = row.witness;
        let da = g.bfs(a);
        let db = g.bfs(b);
        let p_c = |dxy: u32, dxz: u32, dyz: u32| dxy as i64 + dxz as i64 - dyz as i64;
        let dab = da[b as usize];
        let dac = da[c as usize];
        let dbc = db[c as usize];
        let min2 = p_c(dab, dac, dbc).min(p_c(dab, dbc, dac)).min(p_c(dac, dbc, dab));
        assert_eq!(min2, 2 * row.radius as i64);
    }
}

#[test]
fn path_degenerates_to_zero() {
    // Collinear triples: the middle-based product vanishes, so mu_best = 0
    // and R * mu_best stays bounded trivially.
    let g = SpaceGraph::path(41);
    let radii: Vec<u32> = (3..=10).collect();
    let report =
        equilateral_scan(&g, &exact_params(vec![20], radii), &ResourceCaps::default()).unwrap();
    for row in &report.rows {
        assert_eq!(row.mu_best, 0.0);
        assert!(row.radius as f64 * row.mu_best <= 2.0);
    }
}

#[test]
fn three_collinear_points_score_zero() {
    let g = SpaceGraph::path(3);
    let report =
        equilateral_scan(&g, &exact_params(vec![1], vec![2]), &ResourceCaps::default()).unwrap();
    assert_eq!(report.rows[0].ball_size, 3);
    assert_eq!(report.rows[0].mu_best, mu_oracle(&g, 1, 2));
}

#[test]
fn center_l_does_not_grow_with_horoball_depth() {
    // Deep horoball vertices of the cusped (Free(2), <a>) space still sit
    // near centers of far triples; the fitted L at depth 4 stays within 2
    // of the fit at depth 2.
    let f2 = GroupModel::free(2).unwrap();
    let pair = GroupPair::new(f2, vec![vec![0]]).unwrap();
    let x = CuspedTruncation::build(
        pair,
        CuspedParams { cayley_radius: 3, horoball_depth: 4, margin: 1 },
        &ResourceCaps::default(),
    )
    .unwrap();
    let per = x.pair().peripherals()[0].model().clone();
    let at_depth = |d: u32| {
        x.vertex_index(&SpaceVertex::Horoball {
            coset: 0,
            element: per.identity(),
            depth: d,
        })
        .unwrap()
    };
    let r2 = center_criterion(x.graph(), &[at_depth(2)], 3, 6).unwrap();
    let r4 = center_criterion(x.graph(), &[at_depth(4)], 3, 6).unwrap();
    let l2 = r2.rows[0].min_l.expect("depth-2 vertex admits a center");
    let l4 = r4.rows[0].min_l.expect("depth-4 vertex admits a center");
    assert!(l4 <= l2 + 2, "L grew with depth: {l2} -> {l4}");
}

#[test]
fn consistency_between_center_bound_and_mu() {
    // With a uniformly bounded center constant K and measured delta, the
    // quantitative chain asserts mu >= 1/2 for R beyond 6K + 60*delta.
    // At this truncation scale no tested R exceeds the threshold, so the
    // check passes vacuously; assert the bookkeeping stays consistent.
    let f2 = GroupModel::free(2).unwrap();
    let pair = GroupPair::new(f2, vec![vec![0]]).unwrap();
    let x = CuspedTruncation::build(
        pair,
        CuspedParams { cayley_radius: 3, horoball_depth: 3, margin: 0 },
        &ResourceCaps::default(),
    )
    .unwrap();
    let g = x.graph();
    let center = center_criterion(g, &[0, 1, 2], 3, 3).unwrap();
    let k_hat = center.k_fit.expect("cusped vertices admit centers") as f64;
    let delta = cusped_core::hyperbolicity::four_point_delta(
        g,
        &cusped_core::hyperbolicity::DeltaParams::sampled(40_000, 19),
    )
    .unwrap()
    .delta_fourpoint;
    let threshold = 6.0 * k_hat + 60.0 * delta;
    let scan = equilateral_scan(
        g,
        &EquilateralParams {
            basepoints: vec![0],
            radii: vec![2, 3, 4],
            mode: ScanMode::Auto,
            sample_size: Some(20_000),
            seed: Some(4),
        },
        &ResourceCaps::default(),
    )
    .unwrap();
    for row in &scan.rows {
        if (row.radius as f64) > threshold {
            assert!(row.mu_best >= 0.5, "chain violated at R = {}", row.radius);
        }
    }
}
