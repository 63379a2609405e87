use thiserror::Error;

/// Errors produced by game construction, equilibrium solves, and analysis.
#[derive(Error, Debug)]
pub enum CoreError {
    #[error("invalid game specification: {0}")]
    InvalidSpec(String),

    #[error("agent index {index} out of range for n={n}")]
    AgentIndexOutOfRange { index: usize, n: usize },

    #[error("matrix is singular or near-singular (condition number {cond:.3e} exceeds {limit:.1e})")]
    NearSingular { cond: f64, limit: f64 },

    #[error("star closed-form denominator (n-1)*beta^2 - 1 vanishes at n={n}, beta={beta}")]
    SingularStarDenominator { n: usize, beta: f64 },

    #[error("operation requires a common hierarchical payoff-state prior")]
    NonCommonPrior,

    #[error("posterior is undefined: both the state variance and the signal noise variance are zero")]
    DegeneratePosterior,

    #[error("invalid constraint indices: k={k}, l={l} must satisfy 1 <= k <= l <= n={n}")]
    BadConstraintIndex { k: usize, l: usize, n: usize },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
