mod common;

use itertools::Itertools;
use proptest::prelude::*;
use simplexwise::cloud::Isometry;
use simplexwise::invariants::{asd, sdv};
use simplexwise::{amd, pdd, rdd, sdd, sdd_dist_emd, sdm, Cloud};

fn coords(min_m: usize, max_m: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), min_m..=max_m)
}

#[test]
fn collapsed_counts_match_naive_deduplication() {
    let mut rng = common::rng(11);
    for trial in 0..40 {
        let m = 3 + trial % 5;
        let cloud = common::random_cloud(&mut rng, m, 2);
        for h in 1..=3.min(m - 1) {
            let mut counts = sdd(&cloud, h).unwrap().counts();
            counts.sort_unstable();
            assert_eq!(counts, common::naive_class_sizes(&cloud, h), "m={m} h={h}");
        }
    }
}

#[test]
fn symmetric_clouds_collapse_like_the_oracle() {
    // regular polygons and a cube have many congruent subsets
    let polygon = |n: usize| {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        Cloud::from_coordinates(&pts, None).unwrap()
    };
    let cube: Vec<Vec<f64>> = (0..8).map(|i| (0..3).map(|b| ((i >> b) & 1) as f64).collect()).collect();
    let cube = Cloud::from_coordinates(&cube, None).unwrap();
    for cloud in [polygon(5), polygon(6), polygon(7), cube] {
        for h in 1..=3 {
            let mut counts = sdd(&cloud, h).unwrap().counts();
            counts.sort_unstable();
            assert_eq!(counts, common::naive_class_sizes(&cloud, h), "m={} h={h}", cloud.m());
        }
    }
}

#[test]
fn pdd_rows_are_sorted_neighbour_distances() {
    let mut rng = common::rng(12);
    let cloud = common::random_cloud(&mut rng, 6, 3);
    let table = pdd(&cloud).unwrap();
    let mut expected: Vec<Vec<f64>> = (0..6)
        .map(|i| {
            let mut row: Vec<f64> = (0..6).filter(|&j| j != i).map(|j| cloud.dist(i, j)).collect();
            row.sort_by(f64::total_cmp);
            row
        })
        .collect();
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let got = table.to_matrix();
    for (g, e) in got.iter().zip(&expected) {
        for (a, b) in g.iter().zip(e) {
            assert!((a - b).abs() <= 1e-11 * b.max(1.0));
        }
    }
    let averages = amd(&cloud, 5).unwrap();
    for (col, avg) in averages.iter().enumerate() {
        let want = expected.iter().map(|r| r[col]).sum::<f64>() / 6.0;
        assert!((avg - want).abs() <= 1e-11);
    }
}

#[test]
fn sdm_first_moment_is_mean_of_asd() {
    let mut rng = common::rng(13);
    let cloud = common::random_cloud(&mut rng, 7, 2);
    for h in 1..=3 {
        let vectors = asd(&cloud, h).unwrap();
        let first = sdm(&cloud, h, 1).unwrap();
        for (c, value) in first.iter().enumerate() {
            let mean = vectors.iter().map(|v| v.to_vec()[c]).sum::<f64>() / vectors.len() as f64;
            assert!((value - mean).abs() <= 1e-12);
        }
        assert_eq!(vectors.len(), (0..7).combinations(h).count());
    }
}

#[test]
fn sdv_lists_all_pair_distances() {
    let cloud = Cloud::from_coordinates(&[vec![0.0], vec![1.0], vec![3.0], vec![7.0]], None).unwrap();
    assert_eq!(sdv(&cloud, &[3, 0, 2]).unwrap(), vec![3.0, 4.0, 7.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sdd_ignores_rigid_motion_and_relabelling(points in coords(3, 7, 3), seed in any::<u64>()) {
        let cloud = Cloud::from_coordinates(&points, None).unwrap();
        let moved = Isometry::random(3, cloud.m(), seed).apply(&cloud).unwrap();
        for h in 1..=2 {
            let d = sdd_dist_emd(&sdd(&cloud, h).unwrap(), &sdd(&moved, h).unwrap()).unwrap();
            prop_assert!(d <= 1e-9, "h={} d={}", h, d);
        }
    }

    #[test]
    fn rdd_of_reordered_basis_has_same_canonical_form(points in coords(4, 6, 2), rot in 0usize..3) {
        let cloud = Cloud::from_coordinates(&points, None).unwrap();
        let basis = [0usize, 1, 2];
        let mut turned = basis;
        turned.rotate_left(rot);
        let a = simplexwise::canonicalize(&rdd(&cloud, &basis).unwrap());
        let b = simplexwise::canonicalize(&rdd(&cloud, &turned).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sdd_weights_sum_to_one(points in coords(3, 8, 2), h in 1usize..=3) {
        let cloud = Cloud::from_coordinates(&points, None).unwrap();
        prop_assume!(h < cloud.m());
        let s = sdd(&cloud, h).unwrap();
        prop_assert_eq!(s.counts().iter().sum::<u64>(), s.k());
        prop_assert!((s.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
