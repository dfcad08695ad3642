use simplexwise::corpus::{self, CorpusName, Sign, T6Params};
use simplexwise::format::cloud_to_json;
use simplexwise::{pdd, sdd, sdd_dist_emd, Error};

fn sq(x: f64) -> f64 {
    x.sqrt()
}

#[test]
fn five_point_matrix_matches_table() {
    let (minus, plus) = corpus::five_point_sets();
    let row = |a: [f64; 5]| a.map(sq).to_vec();
    let expected_minus = vec![
        row([0.0, 32.0, 6.0, 14.0, 6.0]),
        row([32.0, 0.0, 14.0, 6.0, 14.0]),
        row([6.0, 14.0, 0.0, 8.0, 6.0]),
        row([14.0, 6.0, 8.0, 0.0, 2.0]),
        row([6.0, 14.0, 6.0, 2.0, 0.0]),
    ];
    assert_eq!(minus.distance_matrix(), expected_minus);
    let mut expected_plus = expected_minus.clone();
    for (i, d) in [14.0, 6.0, 6.0, 2.0].into_iter().enumerate() {
        expected_plus[i][4] = sq(d);
        expected_plus[4][i] = sq(d);
    }
    assert_eq!(plus.distance_matrix(), expected_plus);
}

#[test]
fn five_point_plus_has_the_distinguishing_triangle() {
    // B+, G+, R+ are pairwise sqrt2, sqrt6, sqrt6 apart
    let (_, plus) = corpus::five_point_sets();
    let mut sides = [plus.dist(4, 3), plus.dist(3, 1), plus.dist(1, 4)];
    sides.sort_by(f64::total_cmp);
    assert_eq!(sides, [sq(2.0), sq(6.0), sq(6.0)]);
}

#[test]
fn six_point_default_instance() {
    let params = T6Params::default();
    let c = params.c_points().unwrap();
    let expected = [[-1.0, 2.0, 0.0], [1.0, -2.0, 0.0], [0.0, 3.0, 0.0]];
    for (got, want) in c.iter().flatten().zip(expected.iter().flatten()) {
        assert!((got - want).abs() < 1e-12, "{c:?}");
    }
    let (minus, _) = corpus::six_point_sets(&params).unwrap();
    // order R, G, C1, C2, C3, O
    assert!((minus.dist(0, 2) - 3.0).abs() < 1e-12);
    let l3 = params.l[2];
    assert!((4.0 * l3 * l3 - 5.0).abs() < 1e-12);
    let x1 = c[0][0];
    assert!(((x1 + 2.0).powi(2) + c[0][1].powi(2) - 5.0).abs() < 1e-12);
}

#[test]
fn six_point_pdds_agree_but_sdds_differ() {
    let (minus, plus) = corpus::six_point_sets(&T6Params::default()).unwrap();
    assert_eq!(pdd(&minus).unwrap(), pdd(&plus).unwrap());
    let d = sdd_dist_emd(&sdd(&minus, 2).unwrap(), &sdd(&plus, 2).unwrap()).unwrap();
    assert!(d > 1e-6);
}

#[test]
fn infeasible_six_point_parameters_are_rejected() {
    let params = T6Params {
        l: [0.1, 0.1, 0.1],
        signs: [Sign::Plus, Sign::Minus, Sign::Plus],
    };
    assert!(matches!(corpus::six_point_sets(&params), Err(Error::InvalidParameter(_))));
}

#[test]
fn seven_point_sets_share_pdd() {
    let (minus, plus) = corpus::seven_point_sets();
    assert_eq!(pdd(&minus).unwrap(), pdd(&plus).unwrap());
}

#[test]
fn four_point_clouds_share_pair_distances() {
    let collect = |c: &simplexwise::Cloud| {
        let mut v: Vec<f64> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| c.dist(i, j)).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let expected = [sq(2.0), sq(2.0), 2.0, sq(10.0), sq(10.0), 4.0];
    assert_eq!(collect(&corpus::trapezium()), expected);
    assert_eq!(collect(&corpus::kite()), expected);
}

#[test]
fn generation_is_deterministic() {
    for name in CorpusName::ALL {
        let a: Vec<String> = corpus::generate(name, &T6Params::default())
            .unwrap()
            .iter()
            .map(|e| cloud_to_json(&e.cloud))
            .collect();
        let b: Vec<String> = corpus::generate(name, &T6Params::default())
            .unwrap()
            .iter()
            .map(|e| cloud_to_json(&e.cloud))
            .collect();
        assert_eq!(a, b, "{name}");
        assert_eq!(a.len(), 2);
    }
}

#[test]
fn tree_spaces_have_equal_local_distributions_per_branch_sum() {
    let (x, y) = corpus::trees();
    assert_eq!(x.m(), 9);
    assert_eq!(y.m(), 9);
    let total: f64 = (0..9).map(|i| x.weight(i)).sum();
    assert!((total - 1.0).abs() < 1e-12);
}
