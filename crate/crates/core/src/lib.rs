//! Linear-quadratic-Gaussian network games: equilibrium computation under
//! disclosure policies, the welfare-maximization SDP over equilibrium
//! covariances, per-agent disclosure-preference analysis, and seeded ex-post
//! Monte Carlo experiments.

pub mod config;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod linalg;
pub mod montecarlo;
pub mod preference;
pub mod report;
pub mod sdp;

pub use error::CoreError;
pub use game::{BertrandParams, GameSpec, NetworkTopology, PayoffMatrix, StatePrior};
