use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("malformed dissection: {0}")]
    MalformedDissection(String),

    #[error("size guard exceeded: {what} (limit {limit}); set MANGULATIONS_UNGUARDED=1 to lift it")]
    SizeGuardExceeded { what: String, limit: usize },

    #[error("({0}, {1}) is not a diagonal shared by the dissection and the fan")]
    NotAQ0Diagonal(usize, usize),

    #[error("arity mismatch: expected {expected} parts, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dissection is not final: {0}")]
    NotFinal(String),

    #[error("diagonal ({0}, {1}) crosses no diagonal of the fan")]
    EmptyCrossing(usize, usize),

    #[error("no descent witness for {0}")]
    NoWitness(String),

    #[error("({0}) is not an interval: bottom is not below top")]
    NotAnInterval(String),

    #[error("interval decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("interval structure violated: {0}")]
    StructureViolation(String),

    #[error("not an m-vector: {0}")]
    NotAnMVector(String),

    #[error("not an m-Dyck vector: {0}")]
    NotDyck(String),

    #[error("not an m-composition: {0}")]
    NotAComposition(String),

    #[error("construction stuck at position {position}: {reason}")]
    ConstructionStuck { position: usize, reason: String },

    #[error("quotient verification failed at degree {degree}: {detail}")]
    VerificationFailure { degree: usize, detail: String },

    #[error("series identity failed: {0}")]
    SeriesMismatch(String),
}
