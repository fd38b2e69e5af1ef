use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("integral diverges: {0}")]
    Divergent(String),

    /// Inputs sit exactly on the boundary between two asymptotic regimes.
    #[error("case boundary: {0}")]
    CaseBoundary(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid copula: {0}")]
    InvalidCopula(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("quadrature on [{a}, {b}] did not reach tolerance (estimated error {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("hypotheses inconclusive: {0}")]
    Inconclusive(String),

    #[error("empty sample")]
    EmptySample,

    #[error("order statistic index {index} outside 1..={n}")]
    OrderStatistic { index: usize, n: usize },
}

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
