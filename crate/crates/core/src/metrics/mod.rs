//! Exact finite pseudometrics on groups: word metrics, Birkhoff–Kakutani
//! chain metrics, rectified metrics, and the meet/sum operations of the
//! pseudometric poset.

mod construct;
mod filtration;
mod pseudometric;

pub use construct::{
    combine, hat_metric, rectification_bounds, word_metric, CombineMode, Combined, HatMetric, RectificationBounds,
};
pub use filtration::{bk_norm, bk_pseudometric, Filtration};
pub use pseudometric::{validate, validate_left_invariant, PseudoMetric, ValidationReport, Violation};
