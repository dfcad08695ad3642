use itertools::Itertools;

use super::rdd::rdd_unchecked;
use crate::{Cloud, Error, Result, ToleranceConfig};

/// Average Distance Distribution of one basis: sorted basis distances
/// followed by the sorted column means of `R(C;A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AddVector {
    pub sdv: Vec<f64>,
    pub rbar: Vec<f64>,
}

impl AddVector {
    /// Length `m + h(h-3)/2`.
    pub fn len(&self) -> usize {
        self.sdv.len() + self.rbar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.sdv.iter().chain(&self.rbar).copied().collect()
    }
}

/// Sorted Distance Vector: all pairwise distances inside `subset`, ascending.
pub fn sdv(cloud: &Cloud, subset: &[usize]) -> Result<Vec<f64>> {
    if subset.len() < 2 {
        return Err(Error::BasisSize {
            h: subset.len(),
            m: cloud.m(),
        });
    }
    let d = cloud.subset_distance_matrix(subset)?;
    let mut v = d.entries().to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// ADD vector of the basis `basis`, `1 <= h < m`.
pub fn add(cloud: &Cloud, basis: &[usize]) -> Result<AddVector> {
    cloud.check_basis(basis)?;
    Ok(add_unchecked(cloud, basis))
}

fn add_unchecked(cloud: &Cloud, basis: &[usize]) -> AddVector {
    let r = rdd_unchecked(cloud, basis);
    let h = basis.len() as f64;
    let mut sdv = r.d().to_vec();
    sdv.sort_by(f64::total_cmp);
    let mut rbar: Vec<f64> = r.columns().map(|c| c.iter().sum::<f64>() / h).collect();
    rbar.sort_by(f64::total_cmp);
    AddVector { sdv, rbar }
}

/// Average Simplexwise Distribution: one ADD vector per unordered `h`-subset,
/// in the lexicographic order of the subsets.
pub fn asd(cloud: &Cloud, h: usize) -> Result<Vec<AddVector>> {
    let m = cloud.m();
    if h == 0 || h >= m {
        return Err(Error::BasisSize { h, m });
    }
    Ok((0..m)
        .combinations(h)
        .map(|basis| add_unchecked(cloud, &basis))
        .collect())
}

/// Coordinate-wise `l`-th moment of the ASD: the mean for `l = 1`, the
/// population standard deviation for `l = 2`, the standardized moment for
/// `l >= 3`.
pub fn sdm(cloud: &Cloud, h: usize, l: u32) -> Result<Vec<f64>> {
    sdm_with(cloud, h, l, &ToleranceConfig::default())
}

/// As [`sdm`]; a coordinate counts as constant for `l >= 3` when its standard
/// deviation is within the equality slack of its mean.
pub fn sdm_with(cloud: &Cloud, h: usize, l: u32, tol: &ToleranceConfig) -> Result<Vec<f64>> {
    if l == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    let vectors: Vec<Vec<f64>> = asd(cloud, h)?.iter().map(AddVector::to_vec).collect();
    let k = vectors.len() as f64;
    let width = vectors[0].len();
    let mut out = Vec::with_capacity(width);
    for coordinate in 0..width {
        let values = vectors.iter().map(|v| v[coordinate]);
        let mean = values.clone().sum::<f64>() / k;
        let sigma = (values.clone().map(|a| (a - mean).powi(2)).sum::<f64>() / k).sqrt();
        out.push(match l {
            1 => mean,
            2 => sigma,
            _ => {
                if sigma <= tol.slack(mean.abs()) {
                    return Err(Error::DegenerateMoment { coordinate, order: l });
                }
                values.map(|a| ((a - mean) / sigma).powi(l as i32)).sum::<f64>() / k
            }
        });
    }
    Ok(out)
}
