use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("non-finite coordinate in payoff point ({0}, {1})")]
    NonFinite(f64, f64),

    #[error("non-unique intersection")]
    NonUniqueIntersection,

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("grid resolution must be at least 2, got {0}")]
    InvalidGrid(usize),

    #[error("cooperative strategy out of range: z = {z} not in [{lo}, {hi}]")]
    CooperativeStrategyOutOfRange { z: f64, lo: f64, hi: f64 },

    #[error("invalid cooperative grid: {0}")]
    InvalidZGrid(String),

    #[error("inconsistent sections: {0}")]
    InconsistentSections(String),

    #[error("empty payoff core")]
    EmptyPayoffCore,

    #[error("invalid bargaining problem: {0}")]
    InvalidProblem(String),

    #[error("KS solution does not exist")]
    KsDoesNotExist,

    #[error("degenerate Nash bargaining")]
    DegenerateNashBargaining,

    #[error("no coopetitive gain")]
    NoCoopetitiveGain,

    #[error("empty transferable utility portion")]
    EmptyPortion,

    #[error("tie: nonstandard utopia undefined")]
    UtopiaTie,

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("closed form and generic solver disagree by {0:e}")]
    CrossCheckFailed(f64),
}
