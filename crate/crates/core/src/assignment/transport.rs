//! Earth Mover's Distance as a balanced transportation problem, solved by
//! successive shortest augmenting paths with node potentials.

use super::CostMatrix;
use crate::{Error, Result, ToleranceConfig};

const NONE: usize = usize::MAX;

/// A `k×l` matrix of flows between two weighted collections.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FlowMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.cols.max(1)).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// `Σ f_ij c_ij` under an arbitrary cost matrix of the same shape.
    pub fn cost(&self, cost: &CostMatrix) -> f64 {
        self.data.iter().zip(cost.as_slice()).map(|(f, c)| f * c).sum()
    }

    /// Multiplies every flow by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            data: self.data.iter().map(|f| f * factor).collect(),
            ..self.clone()
        }
    }

    pub fn transposed(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols)
                .flat_map(|j| (0..self.rows).map(move |i| self.data[i * self.cols + j]))
                .collect(),
        }
    }

    /// Checks the three constraint families: row sums within the source
    /// weights, column sums within the sink weights, total mass equal to
    /// `total`. Entries must also be nonnegative.
    pub fn satisfies(&self, supply: &[f64], demand: &[f64], total: f64, tol: f64) -> bool {
        self.data.iter().all(|&f| f >= -tol)
            && self.row_sums().iter().zip(supply).all(|(s, w)| *s <= w + tol)
            && self.col_sums().iter().zip(demand).all(|(s, w)| *s <= w + tol)
            && (self.total() - total).abs() <= tol
    }
}

/// Optimal value and one optimal flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub value: f64,
    pub flow: FlowMatrix,
}

/// Earth Mover's Distance between weight vectors that each sum to 1.
pub fn emd(source: &[f64], sink: &[f64], cost: &CostMatrix) -> Result<Transport> {
    emd_with(source, sink, cost, &ToleranceConfig::default())
}

pub fn emd_with(
    source: &[f64],
    sink: &[f64],
    cost: &CostMatrix,
    tol: &ToleranceConfig,
) -> Result<Transport> {
    for w in [source, sink] {
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > tol.weight_sum {
            return Err(Error::WeightSum { sum });
        }
    }
    let out = transport(source, sink, cost)?;
    debug_assert!(
        out.flow.satisfies(source, sink, 1.0, tol.weight_sum),
        "flow violates the transport constraints"
    );
    Ok(out)
}

/// Minimum-cost transport between two nonnegative mass vectors of equal
/// total. Zero-mass objects are dropped before solving. Integer-valued masses
/// are transported exactly.
pub fn transport(supply: &[f64], demand: &[f64], cost: &CostMatrix) -> Result<Transport> {
    if cost.rows() != supply.len() || cost.cols() != demand.len() {
        return Err(Error::Shape(format!(
            "cost is {}x{} but masses have lengths {} and {}",
            cost.rows(),
            cost.cols(),
            supply.len(),
            demand.len()
        )));
    }
    for (index, &value) in supply.iter().chain(demand).enumerate() {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-12 * total_s.max(total_d).max(1.0) {
        return Err(Error::WeightSum { sum: total_d / total_s });
    }

    let rows: Vec<usize> = (0..supply.len()).filter(|&i| supply[i] > 0.0).collect();
    let cols: Vec<usize> = (0..demand.len()).filter(|&j| demand[j] > 0.0).collect();
    let compact = CostMatrix::from_raw(
        rows.len(),
        cols.len(),
        rows.iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| cost.get(i, j))
            .collect(),
    );
    let s: Vec<f64> = rows.iter().map(|&i| supply[i]).collect();
    let d: Vec<f64> = cols.iter().map(|&j| demand[j]).collect();
    let small = solve(&s, &d, &compact);

    let mut data = vec![0.0; supply.len() * demand.len()];
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            data[i * demand.len() + j] = small[a * cols.len() + b];
        }
    }
    let flow = FlowMatrix {
        rows: supply.len(),
        cols: demand.len(),
        data,
    };
    Ok(Transport {
        value: flow.cost(cost),
        flow,
    })
}

/// Dense successive shortest paths. Sources are nodes `0..k`, sinks are
/// `k..k+l`. Residual arcs: source→sink always (cost `c`), sink→source while
/// the pair carries flow (cost `-c`).
fn solve(supply: &[f64], demand: &[f64], cost: &CostMatrix) -> Vec<f64> {
    let (k, l) = (supply.len(), demand.len());
    let n = k + l;
    let mut flow = vec![0.0; k * l];
    if k == 0 || l == 0 {
        return flow;
    }
    let total: f64 = supply.iter().sum();
    let eps = 1e-14 * total.max(1.0);
    let mut rem_s = supply.to_vec();
    let mut rem_d = demand.to_vec();
    let mut pot = vec![0.0; n];
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![NONE; n];
    let mut done = vec![false; n];

    loop {
        if rem_s.iter().all(|&r| r <= eps) {
            break;
        }
        dist.fill(f64::INFINITY);
        prev.fill(NONE);
        done.fill(false);
        for i in 0..k {
            if rem_s[i] > eps {
                dist[i] = 0.0;
            }
        }
        let mut target = NONE;
        loop {
            let mut u = NONE;
            let mut best = f64::INFINITY;
            for v in 0..n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == NONE {
                break;
            }
            done[u] = true;
            if u >= k && rem_d[u - k] > eps {
                target = u;
                break;
            }
            if u < k {
                for j in 0..l {
                    let v = k + j;
                    if done[v] {
                        continue;
                    }
                    let reduced = (cost.get(u, j) + pot[u] - pot[v]).max(0.0);
                    if dist[u] + reduced < dist[v] {
                        dist[v] = dist[u] + reduced;
                        prev[v] = u;
                    }
                }
            } else {
                let j = u - k;
                for i in 0..k {
                    if done[i] || flow[i * l + j] <= eps {
                        continue;
                    }
                    let reduced = (-cost.get(i, j) + pot[u] - pot[i]).max(0.0);
                    if dist[u] + reduced < dist[i] {
                        dist[i] = dist[u] + reduced;
                        prev[i] = u;
                    }
                }
            }
        }
        if target == NONE {
            // unreachable for balanced input; guards against float drift
            break;
        }

        let reach = dist[target];
        for v in 0..n {
            pot[v] += dist[v].min(reach);
        }

        let mut amount = rem_d[target - k];
        let mut v = target;
        while prev[v] != NONE {
            let u = prev[v];
            if u >= k {
                // backward arc sink u -> source v cancels flow on (v, u)
                amount = amount.min(flow[v * l + (u - k)]);
            }
            v = u;
        }
        let start = v;
        amount = amount.min(rem_s[start]);

        let mut v = target;
        while prev[v] != NONE {
            let u = prev[v];
            if u < k {
                flow[u * l + (v - k)] += amount;
            } else {
                let cell = &mut flow[v * l + (u - k)];
                *cell -= amount;
                if *cell <= eps {
                    *cell = 0.0;
                }
            }
            v = u;
        }
        rem_s[start] -= amount;
        rem_d[target - k] -= amount;
    }
    flow
}
