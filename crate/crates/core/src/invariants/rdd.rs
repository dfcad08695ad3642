use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use itertools::Itertools;

use crate::cloud::{pair_index, TriangularDistanceMatrix};
use crate::{Cloud, Result, ToleranceConfig};

/// Relative Distance Distribution of a cloud with respect to an ordered basis
/// `A = (p_1, ..., p_h)`.
///
/// `d` holds the distances inside the basis (row-major upper triangle) and
/// the columns hold, for every point outside the basis, its distances to
/// `p_1..p_h`. Columns are kept in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdd {
    h: usize,
    d: Vec<f64>,
    cols: Vec<f64>,
}

impl Rdd {
    /// Assembles an RDD from its parts, sorting the columns.
    pub fn from_parts(h: usize, d: Vec<f64>, columns: &[Vec<f64>]) -> Result<Self> {
        if h == 0 || d.len() != h * (h - 1) / 2 {
            return Err(crate::Error::Shape(format!(
                "basis of size {h} needs {} distances, got {}",
                h * h.saturating_sub(1) / 2,
                d.len()
            )));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != h) {
            return Err(crate::Error::Shape(format!(
                "columns must have length {h}, got {}",
                c.len()
            )));
        }
        let mut cols = columns.concat();
        sort_columns(&mut cols, h);
        Ok(Self { h, d, cols })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Size of the cloud the RDD was taken from.
    pub fn m(&self) -> usize {
        self.h + self.num_columns()
    }

    pub fn num_columns(&self) -> usize {
        self.cols.len() / self.h
    }

    /// Basis distances, row-major over pairs `i < j`.
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn d_matrix(&self) -> TriangularDistanceMatrix {
        TriangularDistanceMatrix::from_fn(self.h, |i, j| self.d[pair_index(self.h, i, j)])
    }

    /// Basis distance between `i` and `j` in either order.
    #[inline]
    pub fn basis_dist(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            Ordering::Less => self.d[pair_index(self.h, i, j)],
            Ordering::Greater => self.d[pair_index(self.h, j, i)],
            Ordering::Equal => 0.0,
        }
    }

    pub fn column(&self, c: usize) -> &[f64] {
        &self.cols[c * self.h..(c + 1) * self.h]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.cols.chunks(self.h)
    }

    pub(crate) fn flat_columns(&self) -> &[f64] {
        &self.cols
    }

    /// The `h×(m-h)` matrix `R(C;A)` row by row.
    pub fn r_rows(&self) -> Vec<Vec<f64>> {
        (0..self.h)
            .map(|row| self.columns().map(|c| c[row]).collect())
            .collect()
    }

    /// The simplified variant where each column may be permuted on its own:
    /// every column is sorted ascending, then columns are re-sorted.
    pub fn simplified(&self) -> Self {
        let mut cols = self.cols.clone();
        for c in cols.chunks_mut(self.h) {
            c.sort_by(f64::total_cmp);
        }
        sort_columns(&mut cols, self.h);
        Self {
            h: self.h,
            d: self.d.clone(),
            cols,
        }
    }

    fn rounded(&self, digits: usize) -> Self {
        Self {
            h: self.h,
            d: self.d.iter().map(|&x| round_sig(x, digits)).collect(),
            cols: self.cols.iter().map(|&x| round_sig(x, digits)).collect(),
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.h
            .cmp(&other.h)
            .then_with(|| cmp_slices(&self.d, &other.d))
            .then_with(|| cmp_slices(&self.cols, &other.cols))
    }

    fn key_eq(&self, other: &Self) -> bool {
        self.h == other.h && bits_eq(&self.d, &other.d) && bits_eq(&self.cols, &other.cols)
    }
}

/// RDD of `cloud` for the ordered basis `basis`.
pub fn rdd(cloud: &Cloud, basis: &[usize]) -> Result<Rdd> {
    cloud.check_basis(basis)?;
    Ok(rdd_unchecked(cloud, basis))
}

/// RDD with every column sorted internally before the columns are sorted.
pub fn simplified_rdd(cloud: &Cloud, basis: &[usize]) -> Result<Rdd> {
    Ok(rdd(cloud, basis)?.simplified())
}

pub(crate) fn rdd_unchecked(cloud: &Cloud, basis: &[usize]) -> Rdd {
    let h = basis.len();
    let mut d = Vec::with_capacity(h * (h - 1) / 2);
    for i in 0..h {
        for j in (i + 1)..h {
            d.push(cloud.dist(basis[i], basis[j]));
        }
    }
    let mut cols = Vec::with_capacity(h * (cloud.m() - h));
    for q in (0..cloud.m()).filter(|q| !basis.contains(q)) {
        let row = cloud.distance_row(q);
        cols.extend(basis.iter().map(|&p| row[p]));
    }
    sort_columns(&mut cols, h);
    Rdd { h, d, cols }
}

/// An RDD in canonical form: values rounded to a fixed number of significant
/// digits, then the lexicographically smallest `(D, R)` over all orderings of
/// the basis. Equality, ordering and hashing look at the form's bits only.
#[derive(Debug, Clone)]
pub struct CanonicalRdd {
    rdd: Rdd,
    perm: Vec<usize>,
}

impl CanonicalRdd {
    pub fn rdd(&self) -> &Rdd {
        &self.rdd
    }

    /// The basis ordering that produced the form: position `i` of the
    /// canonical basis is position `perm[i]` of the input basis.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Wraps an RDD that is already canonical (as read back from a file).
    pub(crate) fn from_canonical(rdd: Rdd) -> Self {
        let perm = (0..rdd.h).collect();
        Self { rdd, perm }
    }
}

impl std::ops::Deref for CanonicalRdd {
    type Target = Rdd;

    fn deref(&self) -> &Rdd {
        &self.rdd
    }
}

impl PartialEq for CanonicalRdd {
    fn eq(&self, other: &Self) -> bool {
        self.rdd.key_eq(&other.rdd)
    }
}

impl Eq for CanonicalRdd {}

impl PartialOrd for CanonicalRdd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalRdd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rdd.key_cmp(&other.rdd)
    }
}

impl Hash for CanonicalRdd {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rdd.h.hash(state);
        for x in self.rdd.d.iter().chain(&self.rdd.cols) {
            x.to_bits().hash(state);
        }
    }
}

/// Canonical form under the default tolerances.
pub fn canonicalize(rdd: &Rdd) -> CanonicalRdd {
    canonicalize_with(rdd, ToleranceConfig::default().sig_digits)
}

pub fn canonicalize_with(rdd: &Rdd, sig_digits: usize) -> CanonicalRdd {
    let rounded = rdd.rounded(sig_digits);
    let h = rounded.h;
    let (perm, d, cols) = minimal_ordering(h, h, &rounded.cols, |perm| {
        let mut d = Vec::with_capacity(rounded.d.len());
        for i in 0..h {
            for j in (i + 1)..h {
                d.push(rounded.basis_dist(perm[i], perm[j]));
            }
        }
        d
    });
    CanonicalRdd {
        rdd: Rdd { h, d, cols },
        perm,
    }
}

/// Searches all orderings `perm` of an `h`-point basis for the smallest pair
/// `(head(perm), sorted columns)`. Columns have `width >= h` entries; the
/// first `h` follow the basis order, the rest are left in place.
pub(crate) fn minimal_ordering(
    h: usize,
    width: usize,
    cols: &[f64],
    head: impl Fn(&[usize]) -> Vec<f64>,
) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let identity: Vec<usize> = (0..h).collect();
    if h == 1 {
        return (identity.clone(), head(&identity), cols.to_vec());
    }
    let mut best: Option<(Vec<usize>, Vec<f64>, Vec<f64>)> = None;
    for perm in identity.into_iter().permutations(h) {
        let candidate_head = head(&perm);
        if let Some((_, best_head, _)) = &best {
            if cmp_slices(&candidate_head, best_head) == Ordering::Greater {
                continue;
            }
        }
        let mut permuted = cols.to_vec();
        for (dst, src) in permuted.chunks_mut(width).zip(cols.chunks(width)) {
            for r in 0..h {
                dst[r] = src[perm[r]];
            }
        }
        sort_columns(&mut permuted, width);
        let better = match &best {
            None => true,
            Some((_, best_head, best_cols)) => cmp_slices(&candidate_head, best_head)
                .then_with(|| cmp_slices(&permuted, best_cols))
                == Ordering::Less,
        };
        if better {
            best = Some((perm, candidate_head, permuted));
        }
    }
    best.expect("h >= 1 has at least one ordering")
}

/// Sorts fixed-width columns of a flat buffer lexicographically.
pub(crate) fn sort_columns(cols: &mut [f64], width: usize) {
    if cols.len() <= width {
        return;
    }
    let mut chunks: Vec<&[f64]> = cols.chunks(width).collect();
    chunks.sort_by(|a, b| cmp_slices(a, b));
    let sorted: Vec<f64> = chunks.concat();
    cols.copy_from_slice(&sorted);
}

pub(crate) fn cmp_slices(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn bits_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Rounds to `digits` significant decimal digits through the decimal
/// representation, so the result does not depend on the platform's libm.
pub(crate) fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses")
}
