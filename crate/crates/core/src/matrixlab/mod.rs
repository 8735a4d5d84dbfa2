//! Least-singular-value computation and the smoothed-analysis experiment
//! pipeline: tail curves, reference bounds, row regularization,
//! compressibility, rich/poor classification, and threshold arithmetic.

mod classify;
pub mod oracle;
mod rows;
mod svd;
mod tail;

pub use classify::{
    pigeonhole_scale, rich_poor_classify, Classification, RichPoorOptions, RichPoorReport,
};
pub use rows::{compressible_distance, good_row_classify, is_compressible, RowClassification};
pub use svd::{operator_norm, singular_extremes, smallest_singular_value};
pub use tail::{
    operator_norm_tail_check, reference_bound, tail_curve, smoothed_threshold,
    OperatorNormTailReport, ReferenceBound, TailCurve, SmoothedThreshold,
};
