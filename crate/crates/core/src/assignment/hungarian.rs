//! Linear assignment by the O(k³) shortest augmenting path method with
//! dual potentials (Hungarian algorithm).

use super::CostMatrix;
use crate::{Error, Result};

/// Linear Assignment Cost: the optimal total assignment cost divided by `k`.
pub fn lac(cost: &CostMatrix) -> Result<f64> {
    lac_assignment(cost).map(|(value, _)| value)
}

/// LAC together with an optimal assignment `row -> column`.
///
/// The returned value is recomputed from the assignment by summing the chosen
/// entries in row order.
pub fn lac_assignment(cost: &CostMatrix) -> Result<(f64, Vec<usize>)> {
    if !cost.is_square() {
        return Err(Error::Shape(format!(
            "linear assignment needs a square matrix, got {}x{}",
            cost.rows(),
            cost.cols()
        )));
    }
    let k = cost.rows();
    if k == 0 {
        return Err(Error::Shape("linear assignment needs k >= 1".into()));
    }
    let assignment = solve(cost);
    let total: f64 = assignment.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum();
    Ok((total / k as f64, assignment))
}

fn solve(cost: &CostMatrix) -> Vec<usize> {
    let n = cost.rows();
    // 1-based indexing with column 0 as the virtual root
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost.get(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::oracle::brute_force;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lac_of(rows: &[Vec<f64>]) -> f64 {
        lac(&CostMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(lac_of(&[vec![0.0, 2.0], vec![2.0, 0.0]]), 0.0);
        assert_eq!(lac_of(&[vec![1.0, 2.0], vec![3.0, 0.0]]), 0.5);
        assert_eq!(lac_of(&[vec![7.0]]), 7.0);
        assert!(lac(&CostMatrix::new(1, 2, vec![0.0, 1.0]).unwrap()).is_err());
        assert!(lac(&CostMatrix::new(0, 0, vec![]).unwrap()).is_err());
    }

    #[test]
    fn integer_costs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let k = rng.random_range(1..=6);
            let rows: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..k).map(|_| rng.random_range(0..20) as f64).collect())
                .collect();
            let (value, assignment) = lac_assignment(&CostMatrix::from_rows(&rows).unwrap()).unwrap();
            assert_eq!(value * k as f64, brute_force(&rows).1);
            let mut cols = assignment.clone();
            cols.sort_unstable();
            assert_eq!(cols, (0..k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn scaling_scales_the_cost() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let k = rng.random_range(1..=8);
            let data: Vec<f64> = (0..k * k).map(|_| rng.random_range(0..100) as f64).collect();
            let cost = CostMatrix::new(k, k, data).unwrap();
            let (a, assign) = lac_assignment(&cost).unwrap();
            let (b, assign_scaled) = lac_assignment(&cost.scaled(4.0)).unwrap();
            assert_eq!(4.0 * a, b);
            let total = |asg: &[usize]| asg.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum::<f64>();
            assert_eq!(total(&assign), total(&assign_scaled));
        }
    }
}
