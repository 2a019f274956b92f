//! Isometric actions on finite metric spaces and the checks built on them.

mod action;
mod checks;
mod space;

pub use action::{orbit_pseudometric, GroupAction};
pub use checks::{
    check_cobounded, check_generates, coarse_properness_check, macbeath_set, milnor_schwarz_check,
    quasi_continuity_check, CoboundedReport, ContinuityViolation, GenerationReport, MilnorSchwarzReport,
    MilnorSchwarzRow, ProperReport, QuasiContinuityReport,
};
pub use space::FiniteMetricSpace;
