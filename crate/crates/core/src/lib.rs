//! Desk-scale verification lab for anti-concentration inequalities and the
//! least singular value of noisy complex matrices.
//!
//! The crate is organized around five subsystems:
//!
//! * [`numerics`] — complex vectors/matrices, seeded counter-based randomness,
//!   and the catalog of noise distributions with their structural constants.
//! * [`concentration`] — exact and Monte Carlo Lévy concentration functions,
//!   conditioned variants, and the shift-stability / permutation-tail checks.
//! * [`fourier`] — the ξ-norm, the Gaussian-weighted exponential moment `P_ξ`,
//!   the Esseen-type integral majorant, Gaussian-integer lattice distances,
//!   certified annulus scans, and the explicit diophantine bound chain.
//! * [`counting`] — exact finite-field counting over `F_p + iF_p`: signed
//!   zero-sum counts, Cauchy-Davenport, sumset iteration, and the B-set
//!   cardinality bound.
//! * [`matrixlab`] — from-scratch singular value extremes, tail curves against
//!   reference bounds, row regularization, compressibility, rich/poor vector
//!   classification, and the threshold calculator.
//!
//! Every Monte Carlo routine takes a [`numerics::RandomSource`]; identical
//! seeds reproduce identical results bit for bit, independent of thread count.

pub mod concentration;
pub mod counting;
pub mod error;
pub mod fourier;
pub mod matrixlab;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, ComplexVec, NoiseDistribution, RandomSource};
