//! The ξ-norm, the Gaussian-weighted exponential moment P_ξ, the Esseen-type
//! integral majorant, Gaussian-integer lattice distance, certified annulus
//! scans, and the explicit diophantine bound chain.

mod annulus;
mod bound;
mod esseen;
mod lattice;
mod pxi;

pub use annulus::{annulus_search, AnnulusMode, AnnulusOutcome, DiophantineWitness};
pub use bound::{
    diophantine_soundness_check, integer_approx_at_scale, refined_diophantine_bound,
    DiophantineSoundnessReport, ScaleApproximation, ScaleSearch,
};
pub use esseen::esseen_integral_majorant;
pub use lattice::lattice_dist;
pub use pxi::{
    doubling_check, fourier_majorization_check, p_xi_exact, p_xi_monte_carlo, xi_norm_sq,
    DoublingReport, MajorizationReport,
};
