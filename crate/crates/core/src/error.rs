use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid, worker or run parameters violate a structural invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An operation was handed a field whose layout/space tag does not
    /// match the operation's contract.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Exact solution evaluated at its singular time.
    #[error("singular time: {0}")]
    SingularTime(String),

    /// Scenario base/modifier combination is not defined.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
