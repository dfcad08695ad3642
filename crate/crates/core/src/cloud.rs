//! Finite metric spaces given by coordinates or by a distance matrix.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Numerical tolerances shared by validation and canonicalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative tolerance for distance equality.
    pub eq_rel: f64,
    /// Absolute floor applied on top of `eq_rel`.
    pub eq_abs: f64,
    /// Allowed deviation of a weight vector's sum from 1.
    pub weight_sum: f64,
    /// Significant digits kept when canonical forms are rounded.
    pub sig_digits: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_rel: 1e-9,
            eq_abs: 1e-12,
            weight_sum: 1e-12,
            sig_digits: 12,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.eq_rel) || !positive(self.eq_abs) || !positive(self.weight_sum) {
            return Err(Error::InvalidParameter(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.sig_digits == 0 || self.sig_digits > 17 {
            return Err(Error::InvalidParameter(format!(
                "sig_digits must lie in 1..=17, got {}",
                self.sig_digits
            )));
        }
        Ok(())
    }

    /// Slack allowed when comparing two distances of the given magnitude.
    pub fn slack(&self, scale: f64) -> f64 {
        self.eq_rel * scale.abs() + self.eq_abs
    }

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.slack(a.abs().max(b.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudKind {
    Coordinates,
    Matrix,
}

/// A finite metric space with an attached probability measure.
///
/// Distances are materialized at construction, so every accessor is O(1).
/// Weights default to the uniform measure `1/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cloud {
    kind: CloudKind,
    m: usize,
    dim: usize,
    points: Vec<f64>,
    dist: Vec<f64>,
    weights: Vec<f64>,
    explicit_weights: bool,
}

impl Cloud {
    /// Builds a Euclidean cloud from point coordinates.
    pub fn from_coordinates(points: &[Vec<f64>], weights: Option<&[f64]>) -> Result<Self> {
        Self::from_coordinates_with(points, weights, &ToleranceConfig::default())
    }

    pub fn from_coordinates_with(
        points: &[Vec<f64>],
        weights: Option<&[f64]>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let m = points.len();
        if m == 0 {
            return Err(Error::EmptyCloud);
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        let mut flat = Vec::with_capacity(m * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(x) = p.iter().find(|x| !x.is_finite()) {
                return Err(Error::Parse(format!(
                    "coordinate {x} of point {index} is not finite"
                )));
            }
            flat.extend_from_slice(p);
        }
        let (weights, explicit_weights) = check_weights(m, weights, tol)?;
        Ok(Self {
            kind: CloudKind::Coordinates,
            m,
            dim,
            dist: euclidean_distances(&flat, m, dim),
            points: flat,
            weights,
            explicit_weights,
        })
    }

    /// Builds a cloud from an explicit distance matrix.
    ///
    /// Shape, nonnegativity, the zero diagonal and symmetry are always
    /// checked. The O(m³) triangle-inequality pass only runs when
    /// `validate_triangle` is set.
    pub fn from_matrix(
        matrix: &[Vec<f64>],
        weights: Option<&[f64]>,
        validate_triangle: bool,
    ) -> Result<Self> {
        Self::from_matrix_with(matrix, weights, validate_triangle, &ToleranceConfig::default())
    }

    pub fn from_matrix_with(
        matrix: &[Vec<f64>],
        weights: Option<&[f64]>,
        validate_triangle: bool,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let m = matrix.len();
        if m == 0 {
            return Err(Error::EmptyCloud);
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != m {
                return Err(Error::NotSquare {
                    rows: m,
                    row,
                    cols: r.len(),
                });
            }
        }
        let mut dist = vec![0.0; m * m];
        for i in 0..m {
            let d = matrix[i][i];
            if !d.is_finite() || d.abs() > tol.eq_abs {
                return Err(Error::NonzeroDiagonal { i, value: d });
            }
            for j in (i + 1)..m {
                let (upper, lower) = (matrix[i][j], matrix[j][i]);
                for (a, b, v) in [(i, j, upper), (j, i, lower)] {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::InvalidDistance { i: a, j: b, value: v });
                    }
                }
                if !tol.approx_eq(upper, lower) {
                    return Err(Error::Asymmetric { i, j, upper, lower });
                }
                // +0.0 normalizes a negative zero
                dist[i * m + j] = upper + 0.0;
                dist[j * m + i] = upper + 0.0;
            }
        }
        if validate_triangle {
            if let Some(v) = triangle_violations(&dist, m, tol).into_iter().next() {
                return Err(Error::TriangleViolation {
                    i: v.indices[0],
                    j: v.indices[1],
                    k: v.indices[2],
                    excess: v.magnitude,
                });
            }
        }
        let (weights, explicit_weights) = check_weights(m, weights, tol)?;
        Ok(Self {
            kind: CloudKind::Matrix,
            m,
            dim: 0,
            points: Vec::new(),
            dist,
            weights,
            explicit_weights,
        })
    }

    pub fn kind(&self) -> CloudKind {
        self.kind
    }

    /// Number of points.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Ambient dimension; zero for matrix clouds.
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.m + j]
    }

    pub fn distance_row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.m..(i + 1) * self.m]
    }

    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.m).map(<[f64]>::to_vec).collect()
    }

    pub fn point(&self, i: usize) -> Option<&[f64]> {
        match self.kind {
            CloudKind::Coordinates => Some(&self.points[i * self.dim..(i + 1) * self.dim]),
            CloudKind::Matrix => None,
        }
    }

    pub fn points(&self) -> Option<Vec<Vec<f64>>> {
        match self.kind {
            CloudKind::Coordinates => Some(self.points.chunks(self.dim).map(<[f64]>::to_vec).collect()),
            CloudKind::Matrix => None,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when the weights were supplied rather than defaulted to uniform.
    pub fn has_explicit_weights(&self) -> bool {
        self.explicit_weights
    }

    /// Same metric space with a new measure.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        let (weights, _) = check_weights(self.m, Some(weights), &ToleranceConfig::default())?;
        Ok(Self {
            weights,
            explicit_weights: true,
            ..self.clone()
        })
    }

    /// The same metric space given by its distance matrix.
    pub fn to_matrix_cloud(&self) -> Self {
        Self {
            kind: CloudKind::Matrix,
            dim: 0,
            points: Vec::new(),
            ..self.clone()
        }
    }

    /// Checks that `basis` is a sequence of `1 <= h < m` distinct valid indices.
    pub(crate) fn check_basis(&self, basis: &[usize]) -> Result<()> {
        let h = basis.len();
        if h == 0 || h >= self.m {
            return Err(Error::BasisSize { h, m: self.m });
        }
        self.check_indices(basis)
    }

    fn check_indices(&self, basis: &[usize]) -> Result<()> {
        for (pos, &i) in basis.iter().enumerate() {
            if i >= self.m {
                return Err(Error::IndexOutOfRange { index: i, m: self.m });
            }
            if basis[..pos].contains(&i) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        Ok(())
    }

    /// Triangular matrix of distances inside an ordered basis.
    ///
    /// A basis may cover the whole cloud here; RDDs further require `h < m`.
    pub fn subset_distance_matrix(&self, basis: &[usize]) -> Result<TriangularDistanceMatrix> {
        if basis.is_empty() || basis.len() > self.m {
            return Err(Error::BasisSize {
                h: basis.len(),
                m: self.m,
            });
        }
        self.check_indices(basis)?;
        Ok(TriangularDistanceMatrix::from_fn(basis.len(), |i, j| {
            self.dist(basis[i], basis[j])
        }))
    }

    /// Moves the cloud by `x ↦ rotation·x + translation` and relabels the
    /// points so that new point `i` is the image of old point `permutation[i]`.
    pub fn apply_isometry(
        &self,
        rotation: &[Vec<f64>],
        translation: &[f64],
        permutation: &[usize],
    ) -> Result<Self> {
        if self.kind != CloudKind::Coordinates {
            return Err(Error::RequiresCoordinates);
        }
        let n = self.dim;
        if rotation.len() != n || rotation.iter().any(|r| r.len() != n) || translation.len() != n {
            return Err(Error::Shape(format!(
                "isometry must be {n}x{n} with a translation of length {n}"
            )));
        }
        check_permutation(permutation, self.m)?;
        let deviation = orthogonality_defect(rotation);
        if deviation > ToleranceConfig::default().eq_rel {
            return Err(Error::NotOrthogonal { deviation });
        }
        let moved: Vec<Vec<f64>> = permutation
            .iter()
            .map(|&src| {
                let p = self.point(src).expect("coordinate cloud");
                (0..n)
                    .map(|r| rotation[r].iter().zip(p).map(|(a, x)| a * x).sum::<f64>() + translation[r])
                    .collect()
            })
            .collect();
        let weights: Vec<f64> = permutation.iter().map(|&src| self.weights[src]).collect();
        let mut out = Self::from_coordinates(&moved, self.explicit_weights.then_some(&weights[..]))?;
        if !self.explicit_weights {
            out.weights = weights;
        }
        Ok(out)
    }

    /// Moves every point by an independent displacement drawn uniformly from
    /// the closed ball of radius `eps`, so every pairwise distance changes by
    /// at most `2·eps`. Deterministic in `seed`.
    pub fn perturb(&self, eps: f64, seed: u64) -> Result<Self> {
        if self.kind != CloudKind::Coordinates {
            return Err(Error::RequiresCoordinates);
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be > 0, got {eps}")));
        }
        let n = self.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // shrink slightly so rounding in the sum cannot leave the ball
        let radius_cap = eps * (1.0 - 1e-9);
        let mut out = self.points.clone();
        for p in out.chunks_mut(n) {
            let dir: Vec<f64> = loop {
                let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    break v.into_iter().map(|x| x / norm).collect();
                }
            };
            let u: f64 = rng.random();
            let r = radius_cap * u.powf(1.0 / n as f64);
            for (x, d) in p.iter_mut().zip(dir) {
                *x += r * d;
            }
        }
        Ok(Self {
            dist: euclidean_distances(&out, self.m, n),
            points: out,
            ..self.clone()
        })
    }
}

fn euclidean_distances(points: &[f64], m: usize, dim: usize) -> Vec<f64> {
    let mut dist = vec![0.0; m * m];
    for i in 0..m {
        let p = &points[i * dim..(i + 1) * dim];
        for j in (i + 1)..m {
            let q = &points[j * dim..(j + 1) * dim];
            let d = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            dist[i * m + j] = d;
            dist[j * m + i] = d;
        }
    }
    dist
}

fn check_weights(m: usize, weights: Option<&[f64]>, tol: &ToleranceConfig) -> Result<(Vec<f64>, bool)> {
    let Some(w) = weights else {
        return Ok((vec![1.0 / m as f64; m], false));
    };
    if w.len() != m {
        return Err(Error::WeightCount {
            expected: m,
            found: w.len(),
        });
    }
    if let Some((index, &value)) = w.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidWeight { index, value });
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > tol.weight_sum {
        return Err(Error::WeightSum { sum });
    }
    Ok((w.to_vec(), true))
}

fn check_permutation(perm: &[usize], m: usize) -> Result<()> {
    if perm.len() != m {
        return Err(Error::Shape(format!(
            "permutation has length {}, cloud has {m} points",
            perm.len()
        )));
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// max |QᵀQ − I| over all entries.
fn orthogonality_defect(q: &[Vec<f64>]) -> f64 {
    let n = q.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dot: f64 = (0..n).map(|r| q[r][a] * q[r][b]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// Upper-triangular distances inside an ordered basis `(p_1, ..., p_h)`.
///
/// Entries are stored row by row for `i < j`, which is the `(i, j-1)` slot of
/// an `(h-1)×(h-1)` upper-triangular layout.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularDistanceMatrix {
    h: usize,
    entries: Vec<f64>,
}

impl TriangularDistanceMatrix {
    pub(crate) fn from_fn(h: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(h * h.saturating_sub(1) / 2);
        for i in 0..h {
            for j in (i + 1)..h {
                entries.push(f(i, j));
            }
        }
        Self { h, entries }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distance between basis points `i < j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < j && j < self.h, "need i < j < h");
        self.entries[pair_index(self.h, i, j)]
    }

    /// The `(h-1)×(h-1)` layout with zeros below the diagonal.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let n = self.h.saturating_sub(1);
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..self.h {
            for j in (i + 1)..self.h {
                rows[i][j - 1] = self.get(i, j);
            }
        }
        rows
    }
}

/// Position of the pair `i < j` in a row-major upper-triangular flattening.
#[inline]
pub(crate) fn pair_index(h: usize, i: usize, j: usize) -> usize {
    i * (2 * h - i - 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Square,
    Nonnegativity,
    ZeroDiagonal,
    Symmetry,
    Triangle,
}

/// One failed metric axiom with the offending indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricViolation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub magnitude: f64,
}

/// Lists every metric-axiom violation of a square matrix under the default
/// tolerances. An empty report means the matrix is a (pseudo-free) metric.
pub fn validate_metric(matrix: &[Vec<f64>]) -> Vec<MetricViolation> {
    validate_metric_with(matrix, &ToleranceConfig::default())
}

pub fn validate_metric_with(matrix: &[Vec<f64>], tol: &ToleranceConfig) -> Vec<MetricViolation> {
    let m = matrix.len();
    let mut out = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != m {
            out.push(MetricViolation {
                axiom: Axiom::Square,
                indices: vec![i],
                magnitude: (row.len() as f64 - m as f64).abs(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..m {
        if matrix[i][i].abs() > tol.eq_abs || !matrix[i][i].is_finite() {
            out.push(MetricViolation {
                axiom: Axiom::ZeroDiagonal,
                indices: vec![i],
                magnitude: matrix[i][i].abs(),
            });
        }
        for j in 0..m {
            let v = matrix[i][j];
            if i != j && !(v.is_finite() && v >= 0.0) {
                out.push(MetricViolation {
                    axiom: Axiom::Nonnegativity,
                    indices: vec![i, j],
                    magnitude: -v,
                });
            }
            if i < j && !tol.approx_eq(v, matrix[j][i]) {
                out.push(MetricViolation {
                    axiom: Axiom::Symmetry,
                    indices: vec![i, j],
                    magnitude: (v - matrix[j][i]).abs(),
                });
            }
        }
    }
    let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
    out.extend(triangle_violations(&flat, m, tol));
    out
}

fn triangle_violations(dist: &[f64], m: usize, tol: &ToleranceConfig) -> Vec<MetricViolation> {
    let mut out = Vec::new();
    for i in 0..m {
        for k in (i + 1)..m {
            let direct = dist[i * m + k];
            for j in 0..m {
                if j == i || j == k {
                    continue;
                }
                let detour = dist[i * m + j] + dist[j * m + k];
                let excess = direct - detour;
                if excess > tol.slack(direct.max(detour)) {
                    out.push(MetricViolation {
                        axiom: Axiom::Triangle,
                        indices: vec![i, j, k],
                        magnitude: excess,
                    });
                }
            }
        }
    }
    out
}

/// A rigid motion composed with a relabelling, for invariance testing.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
    pub permutation: Vec<usize>,
}

impl Isometry {
    /// A random orthogonal matrix (Gram-Schmidt on a Gaussian matrix, so
    /// reflections occur too), a translation in `[-10, 10]^n` and a uniformly
    /// random relabelling of `m` points.
    pub fn random(n: usize, m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        while basis.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                basis.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        let translation = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let mut permutation: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            let j = rng.random_range(0..=i);
            permutation.swap(i, j);
        }
        Self {
            rotation: basis,
            translation,
            permutation,
        }
    }

    pub fn apply(&self, cloud: &Cloud) -> Result<Cloud> {
        cloud.apply_isometry(&self.rotation, &self.translation, &self.permutation)
    }
}
