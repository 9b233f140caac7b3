use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a documented constraint.
    #[error("invalid {name}: {constraint} (got {value})")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// A density matrix failed its trace or positivity check.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// Internal-energy matrix elements are too large for the leading-order expansion.
    #[error("perturbative regime exceeded: |{element}|/(m c^2) = {ratio:e} (limit {limit:e})")]
    PerturbativeRegime {
        element: &'static str,
        ratio: f64,
        limit: f64,
    },

    /// The geometry hits a singular point (zero net force, coincident masses, ...).
    #[error("singular configuration: {0}")]
    Singular(String),

    /// A closed form was asked for outside the regime in which it holds, or
    /// an unsupported option was requested.
    #[error("unsupported: {0}")]
    Regime(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, constraint: &'static str, value: f64) -> Self {
        Error::InvalidParameter {
            name,
            constraint,
            value,
        }
    }
}
