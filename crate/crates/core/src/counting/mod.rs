//! Exact finite-field counting over F_p + iF_p: signed zero-sum counts,
//! B-set membership, the counting-lemma cardinality bound, Cauchy-Davenport,
//! sumset iteration, and the concentrated-integer-vector census.

mod census;
mod bset;
mod rk;
mod sumset;
mod types;
mod vrho;

pub use census::{census_bound, CensusBoundReport};
pub use bset::{b_set_membership, counting_lemma_verify, CountingLemmaReport};
pub use rk::{rk_comparison_check, rk_alpha, rk_alpha_naive, RkComparisonReport};
pub use sumset::{cauchy_davenport_check, sumset_iteration_check, SumsetIterationReport, SumsetReport};
pub use types::{phi_p, CountingReport, FpElem, FpVector, GaussianIntVector};
pub use vrho::enumerate_v_rho;
