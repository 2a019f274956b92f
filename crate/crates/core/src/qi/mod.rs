//! Coarse Lipschitz and quasi-isometry constants, domination, and coarse
//! boundedness certificates.

mod fit;
mod lipschitz;
mod rosendal;

pub use fit::{closeness, compose_constants, dominates, fit_qi, some_constants, Domination, QiReport};
pub use lipschitz::{fit_coarse_lipschitz, identity_map, Constraint, FrontierPoint, LipschitzFit};
pub use rosendal::{
    exhaustion_check, fu_power, rosendal_criterion, verify_certificate, CbReport, CbVerdict, Certificate,
    ExhaustionReport,
};
