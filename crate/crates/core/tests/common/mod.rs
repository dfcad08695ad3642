//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplexwise::{rdd, Cloud, Rdd};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` points uniform in `[0, 1]^n`.
pub fn random_cloud(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Cloud {
    let points: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    Cloud::from_coordinates(&points, None).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(0.0..10.0)).collect())
        .collect()
}

/// Random probability vector with strictly positive entries.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// `(bottleneck, mean assignment cost)` over every bijection of a square matrix.
pub fn brute_force_assignment(cost: &[Vec<f64>]) -> (f64, f64) {
    let k = cost.len();
    let mut best_max = f64::INFINITY;
    let mut best_sum = f64::INFINITY;
    for perm in (0..k).permutations(k) {
        let mx = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).fold(0.0, f64::max);
        let sum: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        best_max = best_max.min(mx);
        best_sum = best_sum.min(sum);
    }
    (best_max, best_sum / k as f64)
}

/// Minimum-cost transport solved as a linear program.
pub fn lp_transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<_>> = cost
        .iter()
        .map(|row| row.iter().map(|&c| problem.add_var(c, (0.0, f64::INFINITY))).collect())
        .collect();
    for (i, &s) in supply.iter().enumerate() {
        let expr: Vec<_> = vars[i].iter().map(|&v| (v, 1.0)).collect();
        problem.add_constraint(&expr[..], ComparisonOp::Eq, s);
    }
    for (j, &d) in demand.iter().enumerate() {
        let expr: Vec<_> = vars.iter().map(|row| (row[j], 1.0)).collect();
        problem.add_constraint(&expr[..], ComparisonOp::Eq, d);
    }
    problem.solve().unwrap().objective()
}

/// M∞ by enumerating every basis ordering and every column bijection.
pub fn brute_force_m_inf(a: &Rdd, b: &Rdd) -> f64 {
    let h = a.h();
    let n = a.num_columns();
    let mut best = f64::INFINITY;
    for perm in (0..h).permutations(h) {
        let mut d_gap: f64 = 0.0;
        for i in 0..h {
            for j in i + 1..h {
                d_gap = d_gap.max((a.basis_dist(perm[i], perm[j]) - b.basis_dist(i, j)).abs());
            }
        }
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..h)
                            .map(|r| (a.column(i)[perm[r]] - b.column(j)[r]).abs())
                            .fold(0.0, f64::max)
                    })
                    .collect()
            })
            .collect();
        let w = if n == 0 { 0.0 } else { brute_force_assignment(&cost).0 };
        best = best.min(d_gap.max(w));
    }
    best
}

/// RDDs of every `h`-subset grouped into classes at M∞ distance zero,
/// returned as sorted class sizes.
pub fn naive_class_sizes(cloud: &Cloud, h: usize) -> Vec<u64> {
    let rdds: Vec<Rdd> = (0..cloud.m())
        .combinations(h)
        .map(|basis| rdd(cloud, &basis).unwrap())
        .collect();
    let mut reps: Vec<(Rdd, u64)> = Vec::new();
    for r in rdds {
        match reps.iter_mut().find(|(rep, _)| brute_force_m_inf(rep, &r) <= 1e-9) {
            Some((_, count)) => *count += 1,
            None => reps.push((r, 1)),
        }
    }
    let mut sizes: Vec<u64> = reps.into_iter().map(|(_, c)| c).collect();
    sizes.sort_unstable();
    sizes
}
