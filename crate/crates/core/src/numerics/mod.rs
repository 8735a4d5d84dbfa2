//! Complex scalar/vector/matrix arithmetic, seeded randomness, and the
//! catalog of noise distributions with their structural constants.

mod cmatrix;
mod cvec;
mod dist;
mod rng;

pub use cmatrix::ComplexMatrix;
pub use cvec::ComplexVec;
pub use dist::{goodness_constant, sample_vector, Atom, NoiseDistribution, NoiseKind};
pub use rng::RandomSource;

pub type C64 = num_complex::Complex64;
