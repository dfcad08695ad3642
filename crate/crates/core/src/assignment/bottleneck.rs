//! Bottleneck matching by binary search over candidate costs.
//!
//! The optimal bottleneck value is always one of the matrix entries, so the
//! search runs over the sorted distinct entries and tests each threshold for a
//! perfect matching in the bipartite graph of admissible pairs (Hopcroft–Karp).

use super::{linf, CostMatrix};
use crate::{Error, Result};

const FREE: usize = usize::MAX;

/// Bottleneck distance W∞ between two equal-size point sets under the
/// Minkowski L∞ norm.
pub fn bottleneck(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "bottleneck needs equal cardinalities, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::Shape("bottleneck needs at least one point".into()));
    }
    let dim = a[0].len();
    if a.iter().chain(b).any(|p| p.len() != dim) {
        return Err(Error::Shape("all points must share one dimension".into()));
    }
    let k = a.len();
    let cost = CostMatrix::from_fn(k, k, |i, j| linf(&a[i], &b[j]));
    Ok(bottleneck_with_floor(&cost, 0.0).0)
}

/// Optimal bottleneck value over a square cost matrix together with an
/// optimal assignment (`row -> column`).
pub fn bottleneck_assignment(cost: &CostMatrix) -> Result<(f64, Vec<usize>)> {
    if !cost.is_square() {
        return Err(Error::Shape(format!(
            "bottleneck needs a square matrix, got {}x{}",
            cost.rows(),
            cost.cols()
        )));
    }
    Ok(bottleneck_with_floor(cost, 0.0))
}

/// Returns `max(floor, W)` where `W` is the bottleneck value, with a matching
/// achieving it. The floor lets callers that take a maximum with another
/// quantity skip thresholds that cannot matter; the result is still exact.
pub fn bottleneck_with_floor(cost: &CostMatrix, floor: f64) -> (f64, Vec<usize>) {
    let k = cost.rows();
    debug_assert!(cost.is_square());
    if k == 0 {
        return (floor.max(0.0), Vec::new());
    }
    // every row and every column has to be matched somewhere
    let mut lower = floor;
    for i in 0..k {
        let row_min = (0..k).map(|j| cost.get(i, j)).fold(f64::INFINITY, f64::min);
        let col_min = (0..k).map(|j| cost.get(j, i)).fold(f64::INFINITY, f64::min);
        lower = lower.max(row_min).max(col_min);
    }

    let mut matcher = Matcher::new(k);
    if let Some(matching) = matcher.perfect(cost, lower) {
        return (lower, matching);
    }

    let mut candidates: Vec<f64> = cost.as_slice().iter().copied().filter(|&c| c > lower).collect();
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // the largest candidate admits every pair, so it is always feasible
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matcher.feasible(cost, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = candidates[lo];
    let matching = matcher
        .perfect(cost, value)
        .expect("threshold found by search admits a perfect matching");
    (value, matching)
}

/// Hopcroft–Karp over the graph `{(i, j) : cost(i, j) <= threshold}`.
struct Matcher {
    k: usize,
    adj: Vec<Vec<usize>>,
    match_left: Vec<usize>,
    match_right: Vec<usize>,
    layer: Vec<u32>,
    queue: Vec<usize>,
}

impl Matcher {
    fn new(k: usize) -> Self {
        Self {
            k,
            adj: vec![Vec::with_capacity(k); k],
            match_left: vec![FREE; k],
            match_right: vec![FREE; k],
            layer: vec![0; k],
            queue: Vec::with_capacity(k),
        }
    }

    fn feasible(&mut self, cost: &CostMatrix, threshold: f64) -> bool {
        self.max_matching(cost, threshold) == self.k
    }

    fn perfect(&mut self, cost: &CostMatrix, threshold: f64) -> Option<Vec<usize>> {
        self.feasible(cost, threshold).then(|| self.match_left.clone())
    }

    fn max_matching(&mut self, cost: &CostMatrix, threshold: f64) -> usize {
        let k = self.k;
        for (i, adj) in self.adj.iter_mut().enumerate() {
            adj.clear();
            adj.extend((0..k).filter(|&j| cost.get(i, j) <= threshold));
        }
        self.match_left.fill(FREE);
        self.match_right.fill(FREE);

        // greedy start
        let mut size = 0;
        for i in 0..k {
            if let Some(&j) = self.adj[i].iter().find(|&&j| self.match_right[j] == FREE) {
                self.match_left[i] = j;
                self.match_right[j] = i;
                size += 1;
            }
        }
        while size < k && self.bfs() {
            for i in 0..k {
                if self.match_left[i] == FREE && self.dfs(i) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Layers free left vertices at 0; returns whether an augmenting path exists.
    fn bfs(&mut self) -> bool {
        const INF: u32 = u32::MAX;
        self.queue.clear();
        for i in 0..self.k {
            if self.match_left[i] == FREE {
                self.layer[i] = 0;
                self.queue.push(i);
            } else {
                self.layer[i] = INF;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < self.queue.len() {
            let i = self.queue[head];
            head += 1;
            for &j in &self.adj[i] {
                let next = self.match_right[j];
                if next == FREE {
                    found = true;
                } else if self.layer[next] == INF {
                    self.layer[next] = self.layer[i] + 1;
                    self.queue.push(next);
                }
            }
        }
        found
    }

    fn dfs(&mut self, i: usize) -> bool {
        for idx in 0..self.adj[i].len() {
            let j = self.adj[i][idx];
            let next = self.match_right[j];
            let ok = next == FREE || (self.layer[next] == self.layer[i] + 1 && self.dfs(next));
            if ok {
                self.match_left[i] = j;
                self.match_right[j] = i;
                return true;
            }
        }
        self.layer[i] = u32::MAX;
        false
    }
}
