//! Exact and Monte Carlo computation of the Lévy concentration function,
//! conditioned variants, and the shift-stability and permutation-tail checks.

mod levy;
mod shift;

pub use levy::{
    conditioning_inequality_check, lcf_conditioned, lcf_conditioned_exact, lcf_exact,
    lcf_monte_carlo, ConditionEvent, ConditioningReport, LcfMethod, LevyEstimate, EXACT_BUDGET,
};
pub(crate) use levy::sum_law;
pub use shift::{
    perm_tail_check, shift_bound_conditioned_check, shift_bound_subgaussian_check, PermTailReport,
    ShiftReport,
};
