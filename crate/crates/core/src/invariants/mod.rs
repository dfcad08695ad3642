//! Isometry invariants built from distances: RDD and its canonical form,
//! SDD, PDD, AMD and the average-based SDV, ADD, ASD and SDM.

mod moments;
mod rdd;
mod sdd;

pub use moments::{add, asd, sdm, sdm_with, sdv, AddVector};
pub use rdd::{canonicalize, canonicalize_with, rdd, simplified_rdd, CanonicalRdd, Rdd};
pub use sdd::{amd, pdd, sdd, sdd_with, Pdd, PddRow, Sdd, SddConfig, SddItem};

pub(crate) use rdd::{bits_eq, cmp_slices, minimal_ordering, round_sig, sort_columns};
pub(crate) use sdd::binomial;
