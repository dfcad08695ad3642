//! Isometry invariants of finite metric spaces.
//!
//! A [`Cloud`] is a finite metric space, given either by coordinates under the
//! Euclidean metric or by an explicit distance matrix. For a basis of `h`
//! points the crate builds the Relative Distance Distribution ([`Rdd`]): the
//! distances inside the basis together with the unordered columns of
//! distances from every other point to the basis. Collecting the canonical
//! RDDs of all `h`-point subsets gives the Simplexwise Distance Distribution
//! ([`Sdd`]), an isometry invariant of the cloud.
//!
//! SDDs are compared by the Linear Assignment Cost or the Earth Mover's
//! Distance over the ground metric [`m_inf`], which is a bottleneck distance
//! minimized over permutations of the basis. Both distances move by at most
//! `2ε` when every point is perturbed by at most `ε`.
//!
//! The [`mmspace`] module extends the construction to finite metric-measure
//! spaces and [`corpus`] generates the classic hard-to-distinguish families.

pub mod assignment;
pub mod cloud;
pub mod corpus;
mod error;
pub mod format;
pub mod invariants;
pub mod metrics;
pub mod mmspace;

pub use assignment::{bottleneck, emd, lac, linf_matrix, CostMatrix, FlowMatrix};
pub use cloud::{Cloud, CloudKind, ToleranceConfig, TriangularDistanceMatrix};
pub use error::{Error, Result};
pub use invariants::{
    add, amd, asd, canonicalize, pdd, rdd, sdd, sdm, sdv, simplified_rdd, AddVector, CanonicalRdd,
    Pdd, Rdd, Sdd, SddConfig,
};
pub use metrics::{
    lipschitz_check, m_inf, order_preserving_linf_check, sdd_dist_emd, sdd_dist_lac,
    sdm_lower_bound, MetricReport,
};
