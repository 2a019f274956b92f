use thiserror::Error;

/// Errors raised by constructions and checks in this crate.
///
/// Mathematical counterexamples found by a check are *not* errors; they are
/// reported as data in the corresponding report type. Errors signal inputs
/// that violate a precondition or an invariant of a constructed object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid group model: {0}")]
    InvalidModel(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("capacity exceeded: enumeration passed the cap of {cap} elements")]
    Capacity { cap: usize },
    #[error("element {0} lies outside the filtration")]
    OutOfFiltration(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("point mismatch: {0}")]
    PointMismatch(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("element {0} is not expressible within the enumerated group")]
    NotExpressible(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
