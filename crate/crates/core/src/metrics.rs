//! Distances between invariants: the max metric M∞ on RDDs, LAC and EMD on
//! SDDs, the SDM lower bound and a perturbation harness for the Lipschitz
//! bound.

use itertools::Itertools;
use rayon::prelude::*;

use crate::assignment::{bottleneck_with_floor, lac_assignment, linf, transport, CostMatrix, FlowMatrix};
use crate::invariants::{sdd, sdm, Rdd, Sdd};
use crate::{Cloud, CloudKind, Error, Result};

/// Tolerance used for the Lipschitz and lower-bound checks.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

/// What achieves a reported distance.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Basis ordering applied to the first RDD (position `i` takes its basis
    /// point `permutation[i]`) and the column bijection `first -> second`.
    Matching {
        permutation: Vec<usize>,
        columns: Vec<usize>,
    },
    /// Bijection between the `k` expanded SDD items.
    Assignment(Vec<usize>),
    /// Flow between the collapsed SDD items, in weight units.
    Flow(FlowMatrix),
}

/// A distance value with an optional witness.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub value: f64,
    pub witness: Option<Witness>,
}

fn check_rdd_shapes(a: &Rdd, b: &Rdd) -> Result<()> {
    if a.h() != b.h() || a.num_columns() != b.num_columns() {
        return Err(Error::Shape(format!(
            "RDDs differ in shape: h={} m={} versus h={} m={}",
            a.h(),
            a.m(),
            b.h(),
            b.m()
        )));
    }
    Ok(())
}

/// M∞ between two RDDs of equal shape: the minimum over basis orderings of
/// the larger of the L∞ distance between basis matrices and the bottleneck
/// distance between the column sets.
pub fn m_inf(a: &Rdd, b: &Rdd) -> Result<f64> {
    check_rdd_shapes(a, b)?;
    Ok(m_inf_core(a, b).0)
}

/// M∞ with the minimizing ordering and column bijection.
pub fn m_inf_report(a: &Rdd, b: &Rdd) -> Result<MetricReport> {
    check_rdd_shapes(a, b)?;
    let (value, permutation, columns) = m_inf_core(a, b);
    Ok(MetricReport {
        value,
        witness: Some(Witness::Matching { permutation, columns }),
    })
}

/// Value of the pair `(ordering, column bijection)` under M∞; reproduces a
/// witness.
pub fn m_inf_at(a: &Rdd, b: &Rdd, permutation: &[usize], columns: &[usize]) -> Result<f64> {
    check_rdd_shapes(a, b)?;
    let h = a.h();
    let mut value = basis_gap(a, b, permutation);
    for (i, &j) in columns.iter().enumerate() {
        let (ca, cb) = (a.column(i), b.column(j));
        for r in 0..h {
            value = value.max((ca[permutation[r]] - cb[r]).abs());
        }
    }
    Ok(value)
}

fn basis_gap(a: &Rdd, b: &Rdd, perm: &[usize]) -> f64 {
    let h = a.h();
    let mut gap: f64 = 0.0;
    for i in 0..h {
        for j in (i + 1)..h {
            gap = gap.max((a.basis_dist(perm[i], perm[j]) - b.basis_dist(i, j)).abs());
        }
    }
    gap
}

fn m_inf_core(a: &Rdd, b: &Rdd) -> (f64, Vec<usize>, Vec<usize>) {
    let h = a.h();
    let n = a.num_columns();
    let mut best = (f64::INFINITY, Vec::new(), Vec::new());
    let mut permuted = vec![0.0; h];
    for perm in (0..h).permutations(h) {
        let gap = basis_gap(a, b, &perm);
        if gap >= best.0 {
            continue;
        }
        let cost = CostMatrix::from_fn(n, n, |i, j| {
            let col = a.column(i);
            for r in 0..h {
                permuted[r] = col[perm[r]];
            }
            linf(&permuted, b.column(j))
        });
        let (value, matching) = bottleneck_with_floor(&cost, gap);
        if value < best.0 {
            best = (value, perm, matching);
            if value == 0.0 {
                break;
            }
        }
    }
    best
}

fn check_sdd_shapes(a: &Sdd, b: &Sdd) -> Result<()> {
    if a.h() != b.h() || a.m() != b.m() {
        return Err(Error::Shape(format!(
            "SDDs differ in shape: h={} m={} versus h={} m={}",
            a.h(),
            a.m(),
            b.h(),
            b.m()
        )));
    }
    Ok(())
}

/// M∞ between every pair of collapsed items, computed in parallel.
fn item_costs(a: &Sdd, b: &Sdd) -> CostMatrix {
    let (la, lb) = (a.len(), b.len());
    let data: Vec<f64> = (0..la * lb)
        .into_par_iter()
        .map(|idx| m_inf_core(&a.items()[idx / lb].rdd, &b.items()[idx % lb].rdd).0)
        .collect();
    CostMatrix::from_raw(la, lb, data)
}

/// Linear Assignment Cost between SDDs, with every item repeated by its
/// multiplicity so both sides have `k = C(m,h)` unit items.
pub fn sdd_dist_lac(a: &Sdd, b: &Sdd) -> Result<f64> {
    Ok(sdd_dist_lac_report(a, b)?.value)
}

pub fn sdd_dist_lac_report(a: &Sdd, b: &Sdd) -> Result<MetricReport> {
    check_sdd_shapes(a, b)?;
    let k = a.k() as usize;
    if a == b {
        return Ok(MetricReport {
            value: 0.0,
            witness: Some(Witness::Assignment((0..k).collect())),
        });
    }
    let (first, second, swapped) = ordered(a, b);
    let costs = item_costs(first, second);
    let owner = |s: &Sdd| -> Vec<usize> {
        s.items()
            .iter()
            .enumerate()
            .flat_map(|(i, it)| std::iter::repeat_n(i, it.count as usize))
            .collect()
    };
    let (ra, rb) = (owner(first), owner(second));
    let expanded = CostMatrix::from_raw(
        k,
        k,
        (0..k * k).map(|idx| costs.get(ra[idx / k], rb[idx % k])).collect(),
    );
    let (value, mut assignment) = lac_assignment(&expanded)?;
    if swapped {
        let mut inverse = vec![0; k];
        for (i, &j) in assignment.iter().enumerate() {
            inverse[j] = i;
        }
        assignment = inverse;
    }
    Ok(MetricReport {
        value,
        witness: Some(Witness::Assignment(assignment)),
    })
}

/// The arguments in a fixed order so that distances are exactly symmetric.
fn ordered<'a>(a: &'a Sdd, b: &'a Sdd) -> (&'a Sdd, &'a Sdd, bool) {
    let key = |s: &'a Sdd| s.items().iter().map(|it| (&it.rdd, it.count));
    if key(b).cmp(key(a)).is_lt() {
        (b, a, true)
    } else {
        (a, b, false)
    }
}

/// Earth Mover's Distance between SDDs over the collapsed items, weighted by
/// multiplicity, with M∞ as ground distance.
pub fn sdd_dist_emd(a: &Sdd, b: &Sdd) -> Result<f64> {
    Ok(sdd_dist_emd_report(a, b)?.value)
}

pub fn sdd_dist_emd_report(a: &Sdd, b: &Sdd) -> Result<MetricReport> {
    check_sdd_shapes(a, b)?;
    let k = a.k() as f64;
    let masses = |s: &Sdd| -> Vec<f64> { s.counts().into_iter().map(|c| c as f64).collect() };
    let (sa, sb) = (masses(a), masses(b));
    if a == b {
        let l = a.len();
        let flow = transport(&sa, &sb, &CostMatrix::from_fn(l, l, |i, j| if i == j { 0.0 } else { 1.0 }))?;
        return Ok(MetricReport {
            value: 0.0,
            witness: Some(Witness::Flow(flow.flow.scaled(1.0 / k))),
        });
    }
    let (first, second, swapped) = ordered(a, b);
    let (s1, s2) = if swapped { (&sb, &sa) } else { (&sa, &sb) };
    let t = transport(s1, s2, &item_costs(first, second))?;
    debug_assert!(t.flow.satisfies(s1, s2, k, 1e-9 * k));
    let flow = t.flow.scaled(1.0 / k);
    Ok(MetricReport {
        value: t.value / k,
        witness: Some(Witness::Flow(if swapped { flow.transposed() } else { flow })),
    })
}

/// `|SDM(A;h,1) - SDM(B;h,1)|∞`, a lower bound for the EMD between SDDs.
pub fn sdm_lower_bound(a: &Cloud, b: &Cloud, h: usize) -> Result<f64> {
    if a.m() != b.m() {
        return Err(Error::Shape(format!(
            "clouds have {} and {} points",
            a.m(),
            b.m()
        )));
    }
    Ok(linf(&sdm(a, h, 1)?, &sdm(b, h, 1)?))
}

/// One perturbation trial of [`lipschitz_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzTrial {
    pub seed: u64,
    pub emd: f64,
    pub lac: f64,
    /// The upper bound `2ε`.
    pub bound: f64,
    /// `|ΔSDM₁|∞`.
    pub lower: f64,
}

impl LipschitzTrial {
    pub fn emd_ok(&self) -> bool {
        self.emd <= self.bound + LIPSCHITZ_SLACK
    }

    pub fn lac_ok(&self) -> bool {
        self.lac <= self.bound + LIPSCHITZ_SLACK
    }

    pub fn lower_ok(&self) -> bool {
        self.lower <= self.emd + LIPSCHITZ_SLACK
    }

    pub fn is_violation(&self) -> bool {
        !(self.emd_ok() && self.lac_ok() && self.lower_ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub eps: f64,
    pub h: usize,
    pub trials: Vec<LipschitzTrial>,
}

impl LipschitzReport {
    pub fn violations(&self) -> Vec<&LipschitzTrial> {
        self.trials.iter().filter(|t| t.is_violation()).collect()
    }

    pub fn max_emd(&self) -> f64 {
        self.trials.iter().map(|t| t.emd).fold(0.0, f64::max)
    }

    pub fn max_lac(&self) -> f64 {
        self.trials.iter().map(|t| t.lac).fold(0.0, f64::max)
    }
}

/// Perturbs every point by at most `eps` in `trials` independent trials
/// (trial `t` uses seed `seed + t`) and measures how far the SDD moves.
pub fn lipschitz_check(
    cloud: &Cloud,
    eps: f64,
    trials: usize,
    h: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    if cloud.kind() != CloudKind::Coordinates {
        return Err(Error::RequiresCoordinates);
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    let base = sdd(cloud, h)?;
    let base_sdm = sdm(cloud, h, 1)?;
    let trials = (0..trials as u64)
        .map(|t| {
            let trial_seed = seed.wrapping_add(t);
            let moved = cloud.perturb(eps, trial_seed)?;
            let other = sdd(&moved, h)?;
            Ok(LipschitzTrial {
                seed: trial_seed,
                emd: sdd_dist_emd(&base, &other)?,
                lac: sdd_dist_lac(&base, &other)?,
                bound: 2.0 * eps,
                lower: linf(&base_sdm, &sdm(&moved, h, 1)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LipschitzReport { eps, h, trials })
}

/// `(|sort(u) - sort(v)|∞, |u - v|∞)`; the first never exceeds the second.
pub fn order_preserving_linf_check(u: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!(
            "vectors have lengths {} and {}",
            u.len(),
            v.len()
        )));
    }
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort_by(f64::total_cmp);
    sv.sort_by(f64::total_cmp);
    Ok((linf(&su, &sv), linf(u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::rdd;
    use crate::cloud::Isometry;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cloud(rng: &mut ChaCha8Rng, m: usize, dim: usize) -> Cloud {
        let pts: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        Cloud::from_coordinates(&pts, None).unwrap()
    }

    /// M∞ by enumerating orderings and column bijections.
    fn m_inf_brute(a: &Rdd, b: &Rdd) -> f64 {
        let h = a.h();
        let n = a.num_columns();
        let mut best = f64::INFINITY;
        for perm in (0..h).permutations(h) {
            for cols in (0..n).permutations(n) {
                best = best.min(m_inf_at(a, b, &perm, &cols).unwrap());
            }
        }
        best
    }

    #[test]
    fn m_inf_matches_brute_force_and_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let m = rng.random_range(3..=6);
            let h = rng.random_range(1..m.min(4));
            let (ca, cb) = (random_cloud(&mut rng, m, 2), random_cloud(&mut rng, m, 2));
            let basis: Vec<usize> = (0..h).collect();
            let (a, b) = (rdd(&ca, &basis).unwrap(), rdd(&cb, &basis).unwrap());
            let report = m_inf_report(&a, &b).unwrap();
            assert_eq!(report.value, m_inf_brute(&a, &b));
            let Some(Witness::Matching { permutation, columns }) = report.witness else {
                panic!("missing witness")
            };
            assert!((m_inf_at(&a, &b, &permutation, &columns).unwrap() - report.value).abs() <= 1e-12);
            assert_eq!(m_inf(&b, &a).unwrap(), report.value);
        }
    }

    #[test]
    fn m_inf_shapes_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_cloud(&mut rng, 5, 3);
        let a = rdd(&c, &[0, 1]).unwrap();
        assert_eq!(m_inf(&a, &a).unwrap(), 0.0);
        assert!(m_inf(&a, &rdd(&c, &[0]).unwrap()).is_err());
        let d = random_cloud(&mut rng, 6, 3);
        assert!(m_inf(&a, &rdd(&d, &[0, 1]).unwrap()).is_err());
    }

    #[test]
    fn isometric_clouds_are_at_distance_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..5 {
            let c = random_cloud(&mut rng, 6, 3);
            let moved = Isometry::random(3, 6, seed).apply(&c).unwrap();
            for h in 1..=2 {
                let (a, b) = (sdd(&c, h).unwrap(), sdd(&moved, h).unwrap());
                assert!(sdd_dist_emd(&a, &b).unwrap() <= 1e-9);
                assert!(sdd_dist_lac(&a, &b).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn sdd_distances_reject_mismatched_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = random_cloud(&mut rng, 5, 2);
        let d = random_cloud(&mut rng, 6, 2);
        let (a1, a2) = (sdd(&c, 1).unwrap(), sdd(&c, 2).unwrap());
        assert!(sdd_dist_emd(&a1, &a2).is_err());
        assert!(sdd_dist_lac(&a1, &sdd(&d, 1).unwrap()).is_err());
        assert!(sdm_lower_bound(&c, &d, 1).is_err());
        assert_eq!(sdm_lower_bound(&c, &c, 2).unwrap(), 0.0);
    }

    #[test]
    fn emd_witness_is_a_valid_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (c, d) = (random_cloud(&mut rng, 5, 2), random_cloud(&mut rng, 5, 2));
        let (a, b) = (sdd(&c, 2).unwrap(), sdd(&d, 2).unwrap());
        let report = sdd_dist_emd_report(&a, &b).unwrap();
        let Some(Witness::Flow(flow)) = &report.witness else { panic!("missing flow") };
        assert!(flow.satisfies(&a.weights(), &b.weights(), 1.0, 1e-12));
        assert!(report.value > 0.0);
        assert!(report.value <= sdd_dist_lac(&a, &b).unwrap() + 1e-12);
    }

    #[test]
    fn order_preserving_examples() {
        assert_eq!(order_preserving_linf_check(&[1.0, 3.0], &[4.0, 2.0]).unwrap(), (1.0, 3.0));
        assert_eq!(order_preserving_linf_check(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), (0.0, 0.0));
        assert!(order_preserving_linf_check(&[1.0], &[]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let n = rng.random_range(1..8);
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let (sorted, raw) = order_preserving_linf_check(&u, &v).unwrap();
            assert!(sorted <= raw);
        }
    }

    #[test]
    fn pair_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let mut ab = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let mut cd = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            ab.sort_by(f64::total_cmp);
            cd.sort_by(f64::total_cmp);
            let [a, b] = ab;
            let [c, d] = cd;
            assert!((a - c).abs().max((b - d).abs()) <= (a - d).abs().max((b - c).abs()));
        }
    }

    #[test]
    fn lipschitz_harness() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = random_cloud(&mut rng, 5, 2);
        let report = lipschitz_check(&c, 0.05, 5, 2, 7).unwrap();
        assert_eq!(report.trials.len(), 5);
        assert!(report.violations().is_empty());
        assert_eq!(report.trials[3].seed, 10);
        let tiny = lipschitz_check(&c, 1e-12, 2, 1, 0).unwrap();
        assert!(tiny.max_emd() <= 2e-12 + 1e-10);
        assert!(lipschitz_check(&c, 0.0, 1, 1, 0).is_err());
        assert!(lipschitz_check(&c, 0.1, 0, 1, 0).is_err());
        assert!(matches!(
            lipschitz_check(&c.to_matrix_cloud(), 0.1, 1, 1, 0),
            Err(Error::RequiresCoordinates)
        ));
    }
}
