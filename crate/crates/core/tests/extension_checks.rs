//! Cusp-extension checks: identity laws, depth preservation, scaling maps
//! and their functoriality, rough equivariance of automorphisms, pair-map
//! coset constants, and scale stability of the fitted constants.

use cusped_core::caps::ResourceCaps;
use cusped_core::cusped::{CuspedParams, CuspedTruncation};
use cusped_core::extension::{
    equivariance_defect, extend_cusped, extend_horoball, functoriality_sup, make_pair_map,
    measure_qi, GroupHom, PairMapKind, WordMetric,
};
use cusped_core::groups::{GroupDescriptor, GroupModel, GroupPair};
use cusped_core::horoball::{HoroballParams, HoroballTruncation};

fn caps() -> ResourceCaps {
    ResourceCaps::default()
}

fn z_horoball(width: u32, depth: u32) -> HoroballTruncation {
    let z = GroupModel::free_abelian(1)
        .unwrap()
        .with_radius_cap(width.max(12));
    HoroballTruncation::over_ball(
        &z,
        HoroballParams { width_radius: width, max_depth: depth },
        &caps(),
    )
    .unwrap()
}

fn doubling(src: &GroupModel, dst: &GroupModel) -> GroupHom {
    let img = dst.parse_word("a^2").unwrap();
    GroupHom::new(src, dst, vec![img]).unwrap()
}

fn core_vertices(h: &HoroballTruncation) -> Vec<u32> {
    let half = h.width_radius().unwrap() as u64 / 2;
    (0..h.vertex_count() as u32)
        .filter(|&idx| {
            let (e, _) = h.vertex(idx);
            h.base().word_length(&h.width()[e as usize]) <= half
        })
        .collect()
}

fn scaling_eps(width: u32, depth: u32, pairs: usize, seed: u64) -> (f64, f64) {
    let h1 = z_horoball(width, depth);
    let h2 = z_horoball(width * 2, depth);
    let vmap = extend_horoball(&doubling(h1.base(), h2.base()), &h1, &h2).unwrap();
    let fit = measure_qi(
        &h1.to_space_graph(),
        &h2.to_space_graph(),
        &vmap,
        None,
        &core_vertices(&h1),
        pairs,
        seed,
    )
    .unwrap();
    (fit.lambda_fit, fit.eps_fit)
}

#[test]
fn identity_extension_is_pointwise_identity() {
    let f2 = GroupModel::free(2).unwrap();
    let pair = GroupPair::new(f2, vec![vec![0]]).unwrap();
    let x = CuspedTruncation::build(
        pair.clone(),
        CuspedParams { cayley_radius: 2, horoball_depth: 2, margin: 0 },
        &caps(),
    )
    .unwrap();
    let pm = make_pair_map(
        &pair,
        &pair,
        PairMapKind::Identity,
        vec![
            pair.ambient().parse_word("a").unwrap(),
            pair.ambient().parse_word("b").unwrap(),
        ],
        2,
        None,
    )
    .unwrap();
    assert_eq!(pm.r_observed, 0);
    let vmap = extend_cusped(&pm, &x, &x).unwrap();
    for (i, &img) in vmap.forward.iter().enumerate() {
        assert_eq!(i as u32, img);
    }
    let eligible: Vec<u32> = (0..x.graph().vertex_count() as u32).collect();
    let fit = measure_qi(
        x.graph(),
        x.graph(),
        &vmap,
        Some(&vmap),
        &eligible,
        400,
        5,
    )
    .unwrap();
    assert_eq!((fit.lambda_fit, fit.eps_fit), (1.0, 0.0));
    assert_eq!(fit.roundtrip_sup, Some(0));
    let nu = equivariance_defect(&pm, &x, &x, &vmap, 2, 60, 6).unwrap();
    assert_eq!(nu, 0);
    let f = functoriality_sup(x.graph(), &vmap, &vmap, &vmap, &eligible);
    assert_eq!(f, 0);
}

#[test]
fn scaling_preserves_depth_and_formula() {
    let h1 = z_horoball(8, 4);
    let h2 = z_horoball(16, 4);
    let vmap = extend_horoball(&doubling(h1.base(), h2.base()), &h1, &h2).unwrap();
    for idx in 0..h1.vertex_count() as u32 {
        let (e, d) = h1.vertex(idx);
        let (e2, d2) = h2.vertex(vmap.forward[idx as usize]);
        assert_eq!(d, d2, "depth preserved under identity dilation");
        let src = &h1.width()[e as usize];
        let dst = &h2.width()[e2 as usize];
        assert_eq!(h2.base().word_length(dst), 2 * h1.base().word_length(src));
    }
}

#[test]
fn scaling_eps_is_scale_stable() {
    let (l30, e30) = scaling_eps(30, 5, 4_000, 7);
    let (l60, e60) = scaling_eps(60, 6, 4_000, 7);
    assert!(l30 <= 1.5 && l60 <= 1.5, "lambda {l30} / {l60}");
    assert!(e30 <= 4.0, "eps at width 30 = {e30}");
    assert!(e60 <= e30 + 1.0, "eps grew: {e30} -> {e60}");
}

#[test]
fn truncation_bump_changes_fits_by_at_most_one() {
    let (l1, e1) = scaling_eps(20, 5, 3_000, 9);
    let (l2, e2) = scaling_eps(21, 6, 3_000, 9);
    assert!((l1 - l2).abs() <= 1.0);
    assert!((e1 - e2).abs() <= 1.0);
}

#[test]
fn doubling_functoriality_is_exact_on_horoballs() {
    let h1 = z_horoball(8, 4);
    let h2 = z_horoball(16, 4);
    let h3 = z_horoball(32, 4);
    let m12 = extend_horoball(&doubling(h1.base(), h2.base()), &h1, &h2).unwrap();
    let m23 = extend_horoball(&doubling(h2.base(), h3.base()), &h2, &h3).unwrap();
    let quad = GroupHom::new(h1.base(), h3.base(), vec![h3.base().parse_word("a^4").unwrap()])
        .unwrap();
    let m13 = extend_horoball(&quad, &h1, &h3).unwrap();
    let eligible: Vec<u32> = (0..h1.vertex_count() as u32).collect();
    assert_eq!(
        functoriality_sup(&h3.to_space_graph(), &m12, &m23, &m13, &eligible),
        0
    );
}

#[test]
fn z_cross_z2_automorphism_is_roughly_equivariant_with_nu_zero() {
    // t -> t^-1, a -> b, b -> a is an isometric automorphism of Z * Z^2
    // permuting the peripheral cosets.
    let m = GroupModel::new(&GroupDescriptor::FreeProduct {
        factors: vec![
            GroupDescriptor::Free { rank: 1, generators: Some(vec!["t".into()]) },
            GroupDescriptor::FreeAbelian { rank: 2, generators: Some(vec!["a".into(), "b".into()]) },
        ],
    })
    .unwrap();
    let pair = GroupPair::new(m, vec![vec![1, 2]]).unwrap();
    let images = vec![
        pair.ambient().parse_word("t^-1").unwrap(),
        pair.ambient().parse_word("b").unwrap(),
        pair.ambient().parse_word("a").unwrap(),
    ];
    let pm = make_pair_map(&pair, &pair, PairMapKind::Automorphism, images, 3, None).unwrap();
    assert_eq!(pm.r_observed, 0, "automorphism permutes cosets exactly");
    let x = CuspedTruncation::build(
        pair,
        CuspedParams { cayley_radius: 2, horoball_depth: 2, margin: 0 },
        &caps(),
    )
    .unwrap();
    let vmap = extend_cusped(&pm, &x, &x).unwrap();
    let nu = equivariance_defect(&pm, &x, &x, &vmap, 1, 80, 3).unwrap();
    assert_eq!(nu, 0, "exact isometry case");
    // Edge relations are preserved on a sample: images of neighbors remain
    // neighbors.
    let g = x.graph();
    for u in (0..g.vertex_count() as u32).step_by(3) {
        for &v in g.neighbors(u) {
            let (iu, iv) = (vmap.forward[u as usize], vmap.forward[v as usize]);
            assert!(g.neighbors(iu).contains(&iv));
        }
    }
}

#[test]
fn regenerated_word_metric_changes_lengths_not_cosets() {
    // Identity on (Free(2), <a>) with target generating set {a, b, ab}.
    let f2 = GroupModel::free(2).unwrap();
    let pair = GroupPair::new(f2, vec![vec![0]]).unwrap();
    let gens = vec![
        pair.ambient().parse_word("a").unwrap(),
        pair.ambient().parse_word("b").unwrap(),
        pair.ambient().parse_word("a*b").unwrap(),
    ];
    let metric = WordMetric::new(pair.ambient(), gens).unwrap();
    let ab = pair.ambient().parse_word("a*b").unwrap();
    assert_eq!(pair.ambient().distance(&pair.ambient().identity(), &ab), 2);
    assert_eq!(metric.distance(&pair.ambient().identity(), &ab, 8), Some(1));
    let pm = make_pair_map(
        &pair,
        &pair,
        PairMapKind::Identity,
        vec![
            pair.ambient().parse_word("a").unwrap(),
            pair.ambient().parse_word("b").unwrap(),
        ],
        2,
        Some(metric),
    )
    .unwrap();
    assert_eq!(pm.r_observed, 0, "same cosets under either metric");
}

#[test]
fn inclusion_of_a_peripheral_line() {
    // (Z, {Z}) includes into (Free(2), {<a>}) via a; cosets match exactly.
    let z = GroupModel::free_abelian(1).unwrap();
    let sub = GroupPair::new(z, vec![vec![0]]).unwrap();
    let f2 = GroupModel::free(2).unwrap();
    let big = GroupPair::new(f2, vec![vec![0]]).unwrap();
    let img = big.ambient().parse_word("a").unwrap();
    let pm = make_pair_map(&sub, &big, PairMapKind::Inclusion, vec![img], 3, None).unwrap();
    assert_eq!(pm.r_observed, 0);
    assert_eq!(pm.peripheral_target(0), 0);
}

#[test]
fn group_level_scaling_is_two_lipschitz_exactly() {
    // x -> 2x doubles the word metric on Z: coarse Lipschitz (2, 0).
    let z = GroupModel::free_abelian(1).unwrap();
    let hom = doubling(&z, &z);
    for i in -6i64..=6 {
        for j in -6i64..=6 {
            let g = z.parse_word(&format!("a^{i}")).unwrap();
            let h = z.parse_word(&format!("a^{j}")).unwrap();
            assert_eq!(z.distance(&hom.apply(&g), &hom.apply(&h)), 2 * z.distance(&g, &h));
        }
    }
}

#[test]
fn insufficient_target_names_requirements() {
    let h1 = z_horoball(10, 4);
    let h2 = z_horoball(10, 4);
    match extend_horoball(&doubling(h1.base(), h2.base()), &h1, &h2) {
        Err(cusped_core::Error::InsufficientTarget { width, .. }) => {
            assert_eq!(width, 20, "needs width 2 * 10");
        }
        other => panic!("expected InsufficientTarget, got {other:?}"),
    }
}
