use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;

use super::rdd::{canonicalize_with, rdd_unchecked, CanonicalRdd, Rdd};
use crate::{Cloud, Error, Result, ToleranceConfig};

/// Settings for building SDDs.
#[derive(Debug, Clone, PartialEq)]
pub struct SddConfig {
    pub tolerance: ToleranceConfig,
    /// Largest basis size accepted; memory grows as `C(m,h)·h·m`.
    pub h_max: usize,
}

impl Default for SddConfig {
    fn default() -> Self {
        Self {
            tolerance: ToleranceConfig::default(),
            h_max: 4,
        }
    }
}

/// One distinct canonical RDD and how many `h`-subsets produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SddItem {
    pub rdd: CanonicalRdd,
    pub count: u64,
}

/// Simplexwise Distance Distribution: the canonical RDDs of all unordered
/// `h`-point subsets, identical forms collapsed, sorted by form.
///
/// Item weights are `count / k` with `k = C(m, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sdd {
    h: usize,
    m: usize,
    k: u64,
    items: Vec<SddItem>,
}

impl Sdd {
    /// Rebuilds an SDD from items, sorting and merging equal forms. Counts
    /// must be positive and add up to `C(m, h)`.
    pub fn from_items(h: usize, m: usize, items: Vec<(Rdd, u64)>) -> Result<Self> {
        if h == 0 || h >= m {
            return Err(Error::BasisSize { h, m });
        }
        let k = binomial(m, h);
        let mut collected = Vec::with_capacity(items.len());
        for (rdd, count) in items {
            if rdd.h() != h || rdd.m() != m {
                return Err(Error::Shape(format!(
                    "item has h={} m={}, expected h={h} m={m}",
                    rdd.h(),
                    rdd.m()
                )));
            }
            if count == 0 {
                return Err(Error::InvalidParameter("item counts must be positive".into()));
            }
            collected.push((CanonicalRdd::from_canonical(rdd), count));
        }
        let total: u64 = collected.iter().map(|(_, c)| c).sum();
        if total != k {
            return Err(Error::InvalidParameter(format!(
                "item counts add up to {total}, expected C({m},{h}) = {k}"
            )));
        }
        collected.sort_by(|a, b| a.0.cmp(&b.0));
        let items = collected
            .into_iter()
            .coalesce(|a, b| {
                if a.0 == b.0 {
                    Ok((a.0, a.1 + b.1))
                } else {
                    Err((a, b))
                }
            })
            .map(|(rdd, count)| SddItem { rdd, count })
            .collect();
        Ok(Self { h, m, k, items })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of `h`-subsets, `C(m, h)`.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn items(&self) -> &[SddItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.items.iter().map(|it| it.count).collect()
    }

    pub fn weight(&self, i: usize) -> Ratio<u64> {
        Ratio::new(self.items[i].count, self.k)
    }

    pub fn weights(&self) -> Vec<f64> {
        let k = self.k as f64;
        self.items.iter().map(|it| it.count as f64 / k).collect()
    }

    /// Every subset's RDD, repeated by multiplicity (`k` entries).
    pub fn expanded(&self) -> Vec<&Rdd> {
        self.items
            .iter()
            .flat_map(|it| std::iter::repeat_n(it.rdd.rdd(), it.count as usize))
            .collect()
    }
}

/// SDD under the default configuration.
pub fn sdd(cloud: &Cloud, h: usize) -> Result<Sdd> {
    sdd_with(cloud, h, &SddConfig::default())
}

pub fn sdd_with(cloud: &Cloud, h: usize, config: &SddConfig) -> Result<Sdd> {
    let m = cloud.m();
    if h == 0 || h >= m {
        return Err(Error::BasisSize { h, m });
    }
    if h > config.h_max {
        return Err(Error::BasisCap { h, cap: config.h_max });
    }
    config.tolerance.validate()?;
    let digits = config.tolerance.sig_digits;
    let subsets: Vec<Vec<usize>> = (0..m).combinations(h).collect();
    let mut forms: Vec<CanonicalRdd> = subsets
        .par_iter()
        .map(|basis| canonicalize_with(&rdd_unchecked(cloud, basis), digits))
        .collect();
    forms.par_sort_by(|a, b| a.cmp(b));
    let items = forms
        .into_iter()
        .map(|rdd| SddItem { rdd, count: 1 })
        .coalesce(|a, b| {
            if a.rdd == b.rdd {
                Ok(SddItem {
                    rdd: a.rdd,
                    count: a.count + b.count,
                })
            } else {
                Err((a, b))
            }
        })
        .collect();
    Ok(Sdd {
        h,
        m,
        k: subsets.len() as u64,
        items,
    })
}

pub(crate) fn binomial(m: usize, h: usize) -> u64 {
    let h = h.min(m - h);
    (0..h).fold(1u64, |acc, i| acc * (m - i) as u64 / (i + 1) as u64)
}

/// One row of a Pointwise Distance Distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PddRow {
    /// Number of points sharing this row.
    pub count: usize,
    /// Distances to the other `m - 1` points in increasing order.
    pub distances: Vec<f64>,
}

/// Pointwise Distance Distribution: each point's sorted distances to all
/// other points, identical rows collapsed, rows in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdd {
    m: usize,
    rows: Vec<PddRow>,
}

impl Pdd {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[PddRow] {
        &self.rows
    }

    pub fn weights(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.count as f64 / self.m as f64).collect()
    }

    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.distances.clone()).collect()
    }
}

/// PDD of a cloud with at least two points. It coincides with the SDD of
/// order 1.
pub fn pdd(cloud: &Cloud) -> Result<Pdd> {
    if cloud.m() < 2 {
        return Err(Error::BasisSize { h: 1, m: cloud.m() });
    }
    let s = sdd(cloud, 1)?;
    let rows = s
        .items()
        .iter()
        .map(|it| PddRow {
            count: it.count as usize,
            distances: it.rdd.flat_columns().to_vec(),
        })
        .collect();
    Ok(Pdd { m: cloud.m(), rows })
}

/// Average Minimum Distances: entry `k-1` is the mean over all points of the
/// distance to the `k`-th nearest other point.
pub fn amd(cloud: &Cloud, kmax: usize) -> Result<Vec<f64>> {
    let m = cloud.m();
    if kmax == 0 || kmax >= m {
        return Err(Error::InvalidParameter(format!(
            "kmax must lie in 1..={}, got {kmax}",
            m.saturating_sub(1)
        )));
    }
    let mut sums = vec![0.0; kmax];
    for i in 0..m {
        let mut row: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| cloud.dist(i, j)).collect();
        row.sort_by(f64::total_cmp);
        for (s, d) in sums.iter_mut().zip(&row) {
            *s += d;
        }
    }
    Ok(sums.into_iter().map(|s| s / m as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_345() -> Cloud {
        Cloud::from_coordinates(&[vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 3.0]], None).unwrap()
    }

    fn equilateral(s: f64) -> Cloud {
        Cloud::from_matrix(&[vec![0.0, s, s], vec![s, 0.0, s], vec![s, s, 0.0]], None, true).unwrap()
    }

    #[test]
    fn order_one_sdd_of_a_triangle() {
        let s = sdd(&tri_345(), 1).unwrap();
        assert_eq!(s.k(), 3);
        let rows: Vec<Vec<f64>> = s.items().iter().map(|it| it.rdd.flat_columns().to_vec()).collect();
        assert_eq!(rows, vec![vec![3.0, 4.0], vec![3.0, 5.0], vec![4.0, 5.0]]);
        assert_eq!(s.counts(), vec![1, 1, 1]);
    }

    #[test]
    fn two_points_collapse() {
        let c = Cloud::from_coordinates(&[vec![0.0], vec![2.5]], None).unwrap();
        let s = sdd(&c, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.weight(0), Ratio::new(1, 1));
        assert_eq!(s.items()[0].rdd.flat_columns(), &[2.5]);
    }

    #[test]
    fn parameter_errors() {
        let c = tri_345();
        assert!(matches!(sdd(&c, 0), Err(Error::BasisSize { .. })));
        assert!(matches!(sdd(&c, 3), Err(Error::BasisSize { .. })));
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let c = Cloud::from_coordinates(&pts, None).unwrap();
        let cfg = SddConfig { h_max: 2, ..SddConfig::default() };
        assert!(matches!(sdd_with(&c, 3, &cfg), Err(Error::BasisCap { h: 3, cap: 2 })));
        assert!(amd(&c, 0).is_err());
        assert!(amd(&c, 7).is_err());
    }

    #[test]
    fn weights_are_exact_and_sum_to_one() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![(i % 2) as f64, (i / 2) as f64]).collect();
        let c = Cloud::from_coordinates(&pts, None).unwrap();
        for h in 1..=3 {
            let s = sdd(&c, h).unwrap();
            assert_eq!(s.k(), binomial(6, h));
            let total: Ratio<u64> = (0..s.len()).map(|i| s.weight(i)).sum();
            assert_eq!(total, Ratio::new(1, 1));
            assert_eq!(s.expanded().len() as u64, s.k());
            assert!(s.items().windows(2).all(|w| w[0].rdd < w[1].rdd));
        }
    }

    #[test]
    fn from_items_merges_and_validates() {
        let s = sdd(&tri_345(), 2).unwrap();
        let parts: Vec<(Rdd, u64)> = s.items().iter().map(|it| (it.rdd.rdd().clone(), it.count)).collect();
        assert_eq!(Sdd::from_items(2, 3, parts.clone()).unwrap(), s);
        assert!(Sdd::from_items(2, 3, parts[..1].to_vec()).is_err());
        let doubled = vec![(parts[0].0.clone(), 1), (parts[0].0.clone(), 2)];
        assert_eq!(Sdd::from_items(2, 3, doubled).unwrap().counts(), vec![3]);
    }

    #[test]
    fn pdd_examples() {
        let p = pdd(&equilateral(1.0)).unwrap();
        assert_eq!(p.rows(), &[PddRow { count: 3, distances: vec![1.0, 1.0] }]);
        assert_eq!(p.weights(), vec![1.0]);
        let p = pdd(&tri_345()).unwrap();
        assert_eq!(p.to_matrix(), vec![vec![3.0, 4.0], vec![3.0, 5.0], vec![4.0, 5.0]]);
        let single = Cloud::from_coordinates(&[vec![0.0]], None).unwrap();
        assert!(pdd(&single).is_err());
    }

    #[test]
    fn amd_examples() {
        let a = amd(&tri_345(), 2).unwrap();
        assert!((a[0] - 10.0 / 3.0).abs() < 1e-15);
        assert!((a[1] - 14.0 / 3.0).abs() < 1e-15);
        assert_eq!(amd(&equilateral(2.0), 2).unwrap(), vec![2.0, 2.0]);
        let two = Cloud::from_coordinates(&[vec![0.0], vec![1.5]], None).unwrap();
        assert_eq!(amd(&two, 1).unwrap(), vec![1.5]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(20, 4), 4845);
        assert_eq!(binomial(4, 1), 4);
    }
}
