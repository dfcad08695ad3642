//! Exact combinatorial solvers: L∞ matrix distance, bottleneck matching,
//! linear assignment and the Earth Mover's Distance.

mod bottleneck;
mod hungarian;
mod transport;

pub use bottleneck::{bottleneck, bottleneck_assignment, bottleneck_with_floor};
pub use hungarian::{lac, lac_assignment};
pub use transport::{emd, emd_with, transport, FlowMatrix, Transport};

use crate::{Error, Result};

/// Dense row-major matrix of nonnegative finite costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidDistance {
                i: pos / cols.max(1),
                j: pos % cols.max(1),
                value: data[pos],
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(row) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {row} has {} entries, expected {cols}",
                rows[row].len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds the matrix from a cost function; panics on negative output in
    /// debug builds only, callers guarantee metric costs.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let c = f(i, j);
                debug_assert!(c.is_finite() && c >= 0.0, "cost ({i},{j}) = {c}");
                data.push(c);
            }
        }
        Self { rows, cols, data }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Multiplies every cost by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            data: self.data.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }
}

/// `max |a_ij - b_ij|` over two matrices of equal shape.
pub fn linf_matrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return Err(Error::Shape("L∞ needs matrices of equal shape".into()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| linf(x, y)).fold(0.0, f64::max))
}

#[inline]
pub(crate) fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Exhaustive references for the solvers, shared by unit tests.
    use itertools::Itertools;

    /// Minimum over all bijections of the max and of the sum of matched costs.
    pub fn brute_force(cost: &[Vec<f64>]) -> (f64, f64) {
        let k = cost.len();
        let mut best_max = f64::INFINITY;
        let mut best_sum = f64::INFINITY;
        for perm in (0..k).permutations(k) {
            let mut mx: f64 = 0.0;
            let mut sum = 0.0;
            for (i, &j) in perm.iter().enumerate() {
                mx = mx.max(cost[i][j]);
                sum += cost[i][j];
            }
            best_max = best_max.min(mx);
            best_sum = best_sum.min(sum);
        }
        (best_max, best_sum)
    }
}
