//! Finite metric-measure spaces: weighted distance distributions (WDD, WSD),
//! the measured simplexwise distribution evaluated at a basis, and local
//! distributions of distances.
//!
//! Two spaces are isomorphic when a bijection preserves both distances and
//! weights, so every invariant here carries the weights along with the
//! distances they decorate.

use std::cmp::Ordering;

use itertools::Itertools;
use rayon::prelude::*;

use crate::assignment::{bottleneck_with_floor, transport, CostMatrix};
use crate::cloud::pair_index;
use crate::invariants::{binomial, bits_eq, cmp_slices, minimal_ordering, round_sig, sort_columns};
use crate::{Cloud, Error, Result, ToleranceConfig};

/// A cloud whose point weights are given explicitly, positive and sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    cloud: Cloud,
}

impl WeightedSpace {
    pub fn new(cloud: Cloud) -> Result<Self> {
        if !cloud.has_explicit_weights() {
            return Err(Error::MissingWeights);
        }
        if let Some((index, &value)) = cloud.weights().iter().find_position(|&&w| w <= 0.0) {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Self { cloud })
    }

    pub fn from_matrix(matrix: &[Vec<f64>], weights: &[f64]) -> Result<Self> {
        Self::new(Cloud::from_matrix(matrix, Some(weights), true)?)
    }

    pub fn cloud(&self) -> &Cloud {
        &self.cloud
    }

    pub fn m(&self) -> usize {
        self.cloud.m()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.cloud.weights()[i]
    }

    /// Relabels the points: point `i` of the result is point `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let m = self.m();
        if perm.len() != m || !perm.iter().all(|&p| p < m) || perm.iter().unique().count() != m {
            return Err(Error::InvalidParameter("relabelling must be a permutation".into()));
        }
        let matrix: Vec<Vec<f64>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.cloud.dist(i, j)).collect())
            .collect();
        let weights: Vec<f64> = perm.iter().map(|&i| self.weight(i)).collect();
        Self::new(Cloud::from_matrix(&matrix, Some(&weights), false)?)
    }
}

/// Weighted Distance Distribution of a weighted space with respect to an
/// ordered basis.
///
/// For `h = 1` the basis part is the single weight of the basis point. For
/// `h >= 2` every basis distance carries the weights of its two endpoints as
/// an ascending pair. Each column holds the distances from a non-basis point
/// to the basis followed by that point's weight; columns are sorted.
#[derive(Debug, Clone)]
pub struct Wdd {
    h: usize,
    distances: Vec<f64>,
    weights: Vec<f64>,
    cols: Vec<f64>,
}

impl Wdd {
    /// Assembles a WDD from its parts, sorting the columns. Each column holds
    /// `h` distances and a weight.
    pub fn from_parts(h: usize, distances: Vec<f64>, weights: Vec<f64>, columns: &[Vec<f64>]) -> Result<Self> {
        let pairs = h * h.saturating_sub(1) / 2;
        let expected_weights = if h == 1 { 1 } else { 2 * pairs };
        if h == 0 || distances.len() != pairs || weights.len() != expected_weights {
            return Err(Error::Shape(format!(
                "basis of size {h} needs {pairs} distances and {expected_weights} weights"
            )));
        }
        if columns.iter().any(|c| c.len() != h + 1) {
            return Err(Error::Shape(format!("columns must have length {}", h + 1)));
        }
        let mut cols = columns.concat();
        sort_columns(&mut cols, h + 1);
        Ok(Self {
            h,
            distances,
            weights,
            cols,
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.h + self.num_columns()
    }

    pub fn num_columns(&self) -> usize {
        self.cols.len() / (self.h + 1)
    }

    /// Basis distances, row-major over pairs `i < j`.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// `[w(p_1)]` for `h = 1`; otherwise `(lo, hi)` per basis pair.
    pub fn basis_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Column `c`: `h` distances then the weight.
    pub fn column(&self, c: usize) -> &[f64] {
        let w = self.h + 1;
        &self.cols[c * w..(c + 1) * w]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.cols.chunks(self.h + 1)
    }

    /// The `(h+1)×(m-h)` matrix row by row, weight row last.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..=self.h)
            .map(|r| self.columns().map(|c| c[r]).collect())
            .collect()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            Ordering::Less => self.distances[pair_index(self.h, i, j)],
            Ordering::Greater => self.distances[pair_index(self.h, j, i)],
            Ordering::Equal => 0.0,
        }
    }

    fn pair_weights(&self, i: usize, j: usize) -> (f64, f64) {
        let p = pair_index(self.h, i.min(j), i.max(j));
        (self.weights[2 * p], self.weights[2 * p + 1])
    }

    fn head(&self, perm: &[usize]) -> Vec<f64> {
        if self.h == 1 {
            return self.weights.clone();
        }
        let pairs = (0..self.h).array_combinations::<2>();
        let mut head: Vec<f64> = pairs.clone().map(|[i, j]| self.dist(perm[i], perm[j])).collect();
        for [i, j] in pairs {
            let (lo, hi) = self.pair_weights(perm[i], perm[j]);
            head.extend([lo, hi]);
        }
        head
    }

    fn rounded(&self, digits: usize) -> Self {
        let r = |v: &[f64]| v.iter().map(|&x| round_sig(x, digits)).collect();
        Self {
            h: self.h,
            distances: r(&self.distances),
            weights: r(&self.weights),
            cols: r(&self.cols),
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.h
            .cmp(&other.h)
            .then_with(|| cmp_slices(&self.distances, &other.distances))
            .then_with(|| cmp_slices(&self.weights, &other.weights))
            .then_with(|| cmp_slices(&self.cols, &other.cols))
    }
}

/// Bitwise equality of all stored values.
impl PartialEq for Wdd {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
            && bits_eq(&self.distances, &other.distances)
            && bits_eq(&self.weights, &other.weights)
            && bits_eq(&self.cols, &other.cols)
    }
}

impl Eq for Wdd {}

impl PartialOrd for Wdd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wdd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

/// WDD of `space` for the ordered basis `basis`, `1 <= h < m`.
pub fn wdd(space: &WeightedSpace, basis: &[usize]) -> Result<Wdd> {
    space.cloud.check_basis(basis)?;
    Ok(wdd_unchecked(space, basis))
}

fn wdd_unchecked(space: &WeightedSpace, basis: &[usize]) -> Wdd {
    let h = basis.len();
    let c = &space.cloud;
    let (distances, weights) = if h == 1 {
        (Vec::new(), vec![space.weight(basis[0])])
    } else {
        let mut d = Vec::with_capacity(h * (h - 1) / 2);
        let mut w = Vec::with_capacity(h * (h - 1));
        for [i, j] in (0..h).array_combinations() {
            let (a, b) = (space.weight(basis[i]), space.weight(basis[j]));
            d.push(c.dist(basis[i], basis[j]));
            w.extend([a.min(b), a.max(b)]);
        }
        (d, w)
    };
    let mut cols = Vec::with_capacity((h + 1) * (c.m() - h));
    for q in (0..c.m()).filter(|q| !basis.contains(q)) {
        cols.extend(basis.iter().map(|&p| c.dist(q, p)));
        cols.push(space.weight(q));
    }
    sort_columns(&mut cols, h + 1);
    Wdd {
        h,
        distances,
        weights,
        cols,
    }
}

/// Canonical form: rounded values, smallest `(basis part, columns)` over all
/// basis orderings.
pub fn canonicalize_wdd(w: &Wdd, sig_digits: usize) -> Wdd {
    let r = w.rounded(sig_digits);
    let h = r.h;
    let (_, head, cols) = minimal_ordering(h, h + 1, &r.cols, |perm| r.head(perm));
    let split = if h == 1 { 0 } else { h * (h - 1) / 2 };
    Wdd {
        h,
        distances: head[..split].to_vec(),
        weights: head[split..].to_vec(),
        cols,
    }
}

/// Weighted Simplexwise Distribution: canonical WDDs of all `h`-subsets with
/// their multiplicities, sorted by form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wsd {
    h: usize,
    m: usize,
    k: u64,
    items: Vec<(Wdd, u64)>,
}

impl Wsd {
    /// Rebuilds a WSD from canonical items; counts must add up to `C(m, h)`.
    pub fn from_items(h: usize, m: usize, mut items: Vec<(Wdd, u64)>) -> Result<Self> {
        if h == 0 || h >= m {
            return Err(Error::BasisSize { h, m });
        }
        if items.iter().any(|(w, c)| w.h != h || w.m() != m || *c == 0) {
            return Err(Error::Shape(format!("items must have h={h}, m={m} and positive counts")));
        }
        let k = binomial(m, h);
        let total: u64 = items.iter().map(|(_, c)| c).sum();
        if total != k {
            return Err(Error::InvalidParameter(format!(
                "item counts add up to {total}, expected C({m},{h}) = {k}"
            )));
        }
        items.sort_by(|a, b| a.0.cmp(&b.0));
        let items = items
            .into_iter()
            .coalesce(|a, b| if a.0 == b.0 { Ok((a.0, a.1 + b.1)) } else { Err((a, b)) })
            .collect();
        Ok(Self { h, m, k, items })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn items(&self) -> &[(Wdd, u64)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn wsd(space: &WeightedSpace, h: usize) -> Result<Wsd> {
    wsd_with(space, h, &ToleranceConfig::default())
}

pub fn wsd_with(space: &WeightedSpace, h: usize, tol: &ToleranceConfig) -> Result<Wsd> {
    let m = space.m();
    if h == 0 || h >= m {
        return Err(Error::BasisSize { h, m });
    }
    tol.validate()?;
    let subsets: Vec<Vec<usize>> = (0..m).combinations(h).collect();
    let mut forms: Vec<Wdd> = subsets
        .par_iter()
        .map(|b| canonicalize_wdd(&wdd_unchecked(space, b), tol.sig_digits))
        .collect();
    forms.par_sort();
    let items = forms
        .into_iter()
        .map(|w| (w, 1u64))
        .coalesce(|a, b| if a.0 == b.0 { Ok((a.0, a.1 + b.1)) } else { Err((a, b)) })
        .collect();
    Ok(Wsd {
        h,
        m,
        k: binomial(m, h),
        items,
    })
}

fn check_wdd_shapes(a: &Wdd, b: &Wdd) -> Result<()> {
    if a.h != b.h || a.num_columns() != b.num_columns() {
        return Err(Error::Shape(format!(
            "WDDs differ in shape: h={} m={} versus h={} m={}",
            a.h,
            a.m(),
            b.h,
            b.m()
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")))
    }
}

/// Distance between WDDs: over all basis orderings, the largest of the
/// basis-distance gap, `gamma` times the basis-weight gap and the bottleneck
/// distance between columns, where column cost is the larger of the distance
/// gap and `gamma` times the weight gap. Minimized over orderings.
pub fn wdd_dist(a: &Wdd, b: &Wdd, gamma: f64) -> Result<f64> {
    check_wdd_shapes(a, b)?;
    check_gamma(gamma)?;
    Ok(wdd_dist_core(a, b, gamma))
}

fn wdd_dist_core(a: &Wdd, b: &Wdd, gamma: f64) -> f64 {
    let h = a.h;
    let n = a.num_columns();
    let mut best = f64::INFINITY;
    for perm in (0..h).permutations(h) {
        let mut gap: f64 = 0.0;
        if h == 1 {
            gap = gamma * (a.weights[0] - b.weights[0]).abs();
        }
        for [i, j] in (0..h).array_combinations() {
            let (alo, ahi) = a.pair_weights(perm[i], perm[j]);
            let (blo, bhi) = b.pair_weights(i, j);
            gap = gap
                .max((a.dist(perm[i], perm[j]) - b.dist(i, j)).abs())
                .max(gamma * (alo - blo).abs().max((ahi - bhi).abs()));
        }
        if gap >= best {
            continue;
        }
        let cost = CostMatrix::from_fn(n, n, |i, j| {
            let (ca, cb) = (a.column(i), b.column(j));
            let mut c = gamma * (ca[h] - cb[h]).abs();
            for r in 0..h {
                c = c.max((ca[perm[r]] - cb[r]).abs());
            }
            c
        });
        best = best.min(bottleneck_with_floor(&cost, gap).0);
        if best == 0.0 {
            break;
        }
    }
    best
}

/// EMD between WSDs with [`wdd_dist`] as ground distance.
pub fn wsd_dist_emd(a: &Wsd, b: &Wsd, gamma: f64) -> Result<f64> {
    if a.h != b.h || a.m != b.m {
        return Err(Error::Shape(format!(
            "WSDs differ in shape: h={} m={} versus h={} m={}",
            a.h, a.m, b.h, b.m
        )));
    }
    check_gamma(gamma)?;
    if a == b {
        return Ok(0.0);
    }
    let (la, lb) = (a.len(), b.len());
    let data: Vec<f64> = (0..la * lb)
        .into_par_iter()
        .map(|idx| wdd_dist_core(&a.items[idx / lb].0, &b.items[idx % lb].0, gamma))
        .collect();
    let cost = CostMatrix::from_raw(la, lb, data);
    let masses = |w: &Wsd| -> Vec<f64> { w.items.iter().map(|(_, c)| *c as f64).collect() };
    Ok(transport(&masses(a), &masses(b), &cost)?.value / a.k as f64)
}

/// One value of the measured simplexwise distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MsdSample {
    /// Basis distances, row-major over pairs `i < j`.
    pub vid: Vec<f64>,
    /// Entry `i` is the measure of the closed ball of radius `d_i` around
    /// basis point `i`.
    pub vsm: Vec<f64>,
}

/// Evaluates the measured distribution at basis `basis` and radii
/// `thresholds`. Balls include their centers.
pub fn msd_evaluate(space: &WeightedSpace, basis: &[usize], thresholds: &[f64]) -> Result<MsdSample> {
    let m = space.m();
    if basis.is_empty() {
        return Err(Error::BasisSize { h: 0, m });
    }
    if let Some(&index) = basis.iter().find(|&&i| i >= m) {
        return Err(Error::IndexOutOfRange { index, m });
    }
    if thresholds.len() != basis.len() {
        return Err(Error::Shape(format!(
            "{} thresholds for a basis of {} points",
            thresholds.len(),
            basis.len()
        )));
    }
    if let Some(&t) = thresholds.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParameter(format!("thresholds must be nonnegative, got {t}")));
    }
    let c = &space.cloud;
    let vid = basis
        .iter()
        .array_combinations()
        .map(|[&p, &q]| c.dist(p, q))
        .collect();
    let vsm = basis
        .iter()
        .zip(thresholds)
        .map(|(&p, &r)| (0..m).filter(|&q| c.dist(p, q) <= r).map(|q| space.weight(q)).sum())
        .collect();
    Ok(MsdSample { vid, vsm })
}

/// Breakpoints `(d, μ(ball(p, d)))` of the right-continuous distribution of
/// distances from point `p`, at each distinct distance, starting at 0.
/// Distances equal within tolerance share a breakpoint.
pub fn local_distribution(space: &WeightedSpace, p: usize) -> Result<Vec<(f64, f64)>> {
    local_distribution_with(space, p, &ToleranceConfig::default())
}

pub fn local_distribution_with(
    space: &WeightedSpace,
    p: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<(f64, f64)>> {
    let m = space.m();
    if p >= m {
        return Err(Error::IndexOutOfRange { index: p, m });
    }
    let mut by_distance: Vec<(f64, f64)> = (0..m)
        .map(|q| (space.cloud.dist(p, q), space.weight(q)))
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut steps: Vec<(f64, f64)> = Vec::new();
    let mut mass = 0.0;
    for (d, w) in by_distance {
        mass += w;
        match steps.last_mut() {
            Some(last) if tol.approx_eq(last.0, d) => last.1 = mass,
            _ => steps.push((d, mass)),
        }
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_points(w: f64) -> WeightedSpace {
        WeightedSpace::from_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[w, 1.0 - w]).unwrap()
    }

    fn random_space(rng: &mut ChaCha8Rng, m: usize) -> WeightedSpace {
        let pts: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let rest: f64 = w[1..].iter().sum();
        w[0] = 1.0 - rest;
        WeightedSpace::new(Cloud::from_coordinates(&pts, Some(&w)).unwrap()).unwrap()
    }

    #[test]
    fn weights_are_mandatory_and_positive() {
        let c = Cloud::from_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], None, true).unwrap();
        assert!(matches!(WeightedSpace::new(c), Err(Error::MissingWeights)));
        assert!(matches!(
            WeightedSpace::from_matrix(&[vec![0.0, 1.0], vec![1.0, 0.0]], &[1.0, 0.0]),
            Err(Error::InvalidWeight { index: 1, .. })
        ));
    }

    #[test]
    fn two_point_wdd() {
        let s = two_points(1.0 / 3.0);
        let w = wdd(&s, &[0]).unwrap();
        assert_eq!(w.basis_weights(), &[1.0 / 3.0]);
        assert_eq!(w.rows(), vec![vec![1.0], vec![1.0 - 1.0 / 3.0]]);
        assert!(w.distances().is_empty());
    }

    #[test]
    fn pair_weights_are_sorted() {
        let s = WeightedSpace::from_matrix(
            &[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]],
            &[0.5, 0.2, 0.3],
        )
        .unwrap();
        let w = wdd(&s, &[0, 1]).unwrap();
        assert_eq!(w.distances(), &[1.0]);
        assert_eq!(w.basis_weights(), &[0.2, 0.5]);
        assert_eq!(w.column(0), &[2.0, 1.5, 0.3]);
    }

    #[test]
    fn uniform_weights_reduce_to_rdd() {
        let pts = [vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]];
        let w = [0.25; 4];
        let s = WeightedSpace::new(Cloud::from_coordinates(&pts, Some(&w)).unwrap()).unwrap();
        let r = crate::invariants::rdd(s.cloud(), &[1, 2]).unwrap();
        let x = wdd(&s, &[1, 2]).unwrap();
        let rows = x.rows();
        assert_eq!(rows[..2].to_vec(), r.r_rows());
        assert_eq!(rows[2], vec![0.25, 0.25]);
    }

    #[test]
    fn isometric_but_not_isomorphic() {
        let (a, b) = (two_points(0.5), two_points(1.0 / 3.0));
        let (wa, wb) = (wsd(&a, 1).unwrap(), wsd(&b, 1).unwrap());
        assert!(wsd_dist_emd(&wa, &wb, 1.0).unwrap() > 0.0);
        assert_eq!(wsd_dist_emd(&wa, &wa, 1.0).unwrap(), 0.0);
        assert!(wsd_dist_emd(&wa, &wb, 0.0).is_err());
        // the underlying clouds are isometric
        let (sa, sb) = (
            crate::invariants::sdd(a.cloud(), 1).unwrap(),
            crate::invariants::sdd(b.cloud(), 1).unwrap(),
        );
        assert_eq!(sa, sb);
    }

    #[test]
    fn relabelling_keeps_wsd_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let m = rng.random_range(3..=6);
            let s = random_space(&mut rng, m);
            let mut perm: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let t = s.relabel(&perm).unwrap();
            for h in 1..m.min(4) {
                assert_eq!(wsd(&s, h).unwrap(), wsd(&t, h).unwrap());
            }
        }
    }

    #[test]
    fn wdd_dist_is_symmetric_and_triangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let m = rng.random_range(3..=5);
            let h = rng.random_range(1..m.min(3));
            let basis: Vec<usize> = (0..h).collect();
            let ws: Vec<Wdd> = (0..3).map(|_| wdd(&random_space(&mut rng, m), &basis).unwrap()).collect();
            let gamma = rng.random_range(0.5..3.0);
            let d = |i: usize, j: usize| wdd_dist(&ws[i], &ws[j], gamma).unwrap();
            assert_eq!(d(0, 1), d(1, 0));
            assert_eq!(d(0, 0), 0.0);
            assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
        }
    }

    #[test]
    fn msd_samples() {
        let s = WeightedSpace::from_matrix(
            &[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]],
            &[0.5, 0.2, 0.3],
        )
        .unwrap();
        let z = msd_evaluate(&s, &[0, 2], &[0.0, 0.0]).unwrap();
        assert_eq!(z.vid, vec![2.0]);
        assert_eq!(z.vsm, vec![0.5, 0.3]);
        let one = msd_evaluate(&s, &[0, 2], &[1.0, 5.0]).unwrap();
        assert_eq!(one.vsm, vec![0.7, 1.0]);
        assert!(msd_evaluate(&s, &[0], &[-1.0]).is_err());
        assert!(msd_evaluate(&s, &[0], &[1.0, 1.0]).is_err());
        assert!(msd_evaluate(&s, &[3], &[1.0]).is_err());
    }

    #[test]
    fn vsm_is_monotone_and_reaches_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = random_space(&mut rng, 6);
        let mut prev = vec![0.0; 2];
        for step in 0..40 {
            let r = step as f64 * 0.05;
            let v = msd_evaluate(&s, &[1, 4], &[r, r]).unwrap().vsm;
            assert!(v.iter().zip(&prev).all(|(a, b)| a >= b));
            prev = v;
        }
        assert!(prev.iter().all(|&x| (x - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn two_point_local_distribution() {
        let s = two_points(0.5);
        assert_eq!(local_distribution(&s, 0).unwrap(), vec![(0.0, 0.5), (1.0, 1.0)]);
        assert!(local_distribution(&s, 2).is_err());
    }
}
