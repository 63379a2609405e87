//! JSON game-configuration ingestion.
//!
//! ```json
//! {
//!   "network": {"star": {"n": 4}}            // or {"n": 4, "edges": [[1,2], ...]}
//!   "payoff":  {"beta": 0.2}                 // or {"H": [[...], ...]}
//!   "prior":   {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}}
//!                                            // or {"general": {"mu": [...], "Sigma": [[...]]}}
//!   "simulation": { ... }                    // optional sweep settings
//! }
//! ```
//!
//! Agent indices in edge lists are 1-based.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{CoreError, Result};
use crate::game::{GameSpec, NetworkTopology, PayoffMatrix, StatePrior};
use crate::montecarlo::{default_beta_grid, Anchor};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum NetworkConfig {
    Star { star: StarNetwork },
    Edges { n: usize, edges: Vec<(usize, usize)> },
}

#[derive(Debug, Deserialize)]
pub struct StarNetwork {
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PayoffConfig {
    Beta { beta: f64 },
    Matrix {
        #[serde(rename = "H")]
        h: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PriorConfig {
    Common { common: CommonPrior },
    General { general: GeneralPrior },
}

#[derive(Debug, Deserialize)]
pub struct CommonPrior {
    pub mu0: f64,
    pub sigma0: f64,
    pub sigma: f64,
}

#[derive(Debug, Deserialize)]
pub struct GeneralPrior {
    pub mu: Vec<f64>,
    #[serde(rename = "Sigma")]
    pub sigma: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
pub struct SimulationSection {
    #[serde(default)]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub mu_draws: Option<usize>,
    #[serde(default)]
    pub gamma_draws: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub anchor: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct GameConfig {
    pub network: NetworkConfig,
    pub payoff: PayoffConfig,
    pub prior: PriorConfig,
    #[serde(default)]
    pub simulation: Option<SimulationSection>,
}

/// Sweep settings with defaults filled in.
#[derive(Debug, Clone)]
pub struct SimulationSettings {
    pub beta_grid: Vec<f64>,
    pub mu_draws: usize,
    pub gamma_draws: usize,
    pub seed: u64,
    pub anchor: Anchor,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            beta_grid: default_beta_grid(),
            mu_draws: 7,
            gamma_draws: 1000,
            seed: 42,
            anchor: Anchor::HyperPriorMu0,
        }
    }
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub spec: GameSpec,
    /// The uniform coupling value when the payoff was given as `beta`.
    pub beta: Option<f64>,
    pub simulation: SimulationSettings,
    /// Canonicalized JSON used for digests.
    pub canonical_json: String,
}

pub fn parse_anchor(s: &str) -> Result<Anchor> {
    match s {
        "realized" => Ok(Anchor::RealizedMu),
        "mu0" => Ok(Anchor::HyperPriorMu0),
        other => Err(CoreError::Config(format!(
            "anchor must be \"realized\" or \"mu0\", got \"{other}\""
        ))),
    }
}

impl GameConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            CoreError::Config(format!(
                "invalid config at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn build(&self, source_text: &str) -> Result<LoadedConfig> {
        let topology = match &self.network {
            NetworkConfig::Star { star } => NetworkTopology::star(star.n)?,
            NetworkConfig::Edges { n, edges } => NetworkTopology::from_edges_1based(*n, edges)?,
        };
        let n = topology.n();
        let (h, beta) = match &self.payoff {
            PayoffConfig::Beta { beta } => {
                let mut h = DMatrix::identity(n, n);
                for (i, j) in topology.edges() {
                    h[(i, j)] = *beta;
                    h[(j, i)] = *beta;
                }
                (h, Some(*beta))
            }
            PayoffConfig::Matrix { h } => {
                if h.len() != n || h.iter().any(|row| row.len() != n) {
                    return Err(CoreError::Config(format!(
                        "payoff matrix must be {n}x{n} to match the network"
                    )));
                }
                (DMatrix::from_fn(n, n, |i, j| h[i][j]), None)
            }
        };
        let payoff = PayoffMatrix::new(h, &topology)?;
        let prior = match &self.prior {
            PriorConfig::Common { common } => {
                StatePrior::common(common.mu0, common.sigma0, common.sigma)?
            }
            PriorConfig::General { general } => {
                let m = general.mu.len();
                if general.sigma.len() != m || general.sigma.iter().any(|r| r.len() != m) {
                    return Err(CoreError::Config(
                        "general prior Sigma must be square and match mu".into(),
                    ));
                }
                StatePrior::general(
                    DVector::from_vec(general.mu.clone()),
                    DMatrix::from_fn(m, m, |i, j| general.sigma[i][j]),
                )?
            }
        };
        let spec = GameSpec::new(topology, payoff, prior)?;

        let mut simulation = SimulationSettings::default();
        if let Some(s) = &self.simulation {
            if let Some(grid) = &s.beta_grid {
                simulation.beta_grid = grid.clone();
            }
            if let Some(v) = s.mu_draws {
                simulation.mu_draws = v;
            }
            if let Some(v) = s.gamma_draws {
                simulation.gamma_draws = v;
            }
            if let Some(v) = s.seed {
                simulation.seed = v;
            }
            if let Some(a) = &s.anchor {
                simulation.anchor = parse_anchor(a)?;
            }
        }
        if simulation.mu_draws < 1 || simulation.gamma_draws < 1 {
            return Err(CoreError::Config(
                "simulation draw counts must be at least 1".into(),
            ));
        }

        // serde_json sorts object keys, giving a canonical rendering.
        let canonical_json = serde_json::from_str::<serde_json::Value>(source_text)
            .map(|v| v.to_string())
            .unwrap_or_else(|_| source_text.to_string());

        Ok(LoadedConfig {
            spec,
            beta,
            simulation,
            canonical_json,
        })
    }
}

/// Parse and validate in one step.
pub fn load_config(text: &str) -> Result<LoadedConfig> {
    GameConfig::from_json(text)?.build(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_star_with_beta() {
        let cfg = load_config(
            r#"{"network": {"star": {"n": 4}},
                "payoff": {"beta": 0.2},
                "prior": {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.spec.n(), 4);
        assert_eq!(cfg.beta, Some(0.2));
        assert_eq!(cfg.spec.h()[(0, 1)], 0.2);
        assert_eq!(cfg.spec.h()[(1, 2)], 0.0);
        assert_eq!(cfg.simulation.seed, 42);
        assert_eq!(cfg.simulation.anchor, Anchor::HyperPriorMu0);
    }

    #[test]
    fn parses_edge_list_with_matrix() {
        let cfg = load_config(
            r#"{"network": {"n": 3, "edges": [[1,2],[2,3]]},
                "payoff": {"H": [[1.0, 0.1, 0.0],[0.1, 1.0, -0.2],[0.0, -0.2, 1.0]]},
                "prior": {"general": {"mu": [0.0,0.0,0.0], "Sigma": [[1,0,0],[0,1,0],[0,0,1]]}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.spec.n(), 3);
        assert_eq!(cfg.beta, None);
        assert_eq!(cfg.spec.h()[(1, 2)], -0.2);
    }

    #[test]
    fn rejects_matrix_coupling_off_edges() {
        let err = load_config(
            r#"{"network": {"n": 3, "edges": [[1,2]]},
                "payoff": {"H": [[1.0, 0.1, 0.5],[0.1, 1.0, 0.0],[0.5, 0.0, 1.0]]},
                "prior": {"common": {"mu0": 0.0, "sigma0": 0.1, "sigma": 0.1}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not an edge"));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = load_config("{\"network\": ").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn simulation_overrides_apply() {
        let cfg = load_config(
            r#"{"network": {"star": {"n": 4}},
                "payoff": {"beta": -0.3},
                "prior": {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}},
                "simulation": {"beta_grid": [-0.2, 0.2], "mu_draws": 3,
                               "gamma_draws": 50, "seed": 7, "anchor": "realized"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.simulation.beta_grid, vec![-0.2, 0.2]);
        assert_eq!(cfg.simulation.mu_draws, 3);
        assert_eq!(cfg.simulation.gamma_draws, 50);
        assert_eq!(cfg.simulation.seed, 7);
        assert_eq!(cfg.simulation.anchor, Anchor::RealizedMu);
    }

    #[test]
    fn bad_anchor_is_a_config_error() {
        let err = load_config(
            r#"{"network": {"star": {"n": 4}},
                "payoff": {"beta": 0.1},
                "prior": {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}},
                "simulation": {"anchor": "sometimes"}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::Config(_)));
    }

    #[test]
    fn star_needs_three_agents() {
        let err = load_config(
            r#"{"network": {"star": {"n": 2}},
                "payoff": {"beta": 0.1},
                "prior": {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("at least 3"));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let a = load_config(
            r#"{"prior": {"common": {"mu0": 1.0, "sigma0": 0.3, "sigma": 0.1}},
                "payoff": {"beta": 0.2},
                "network": {"star": {"n": 4}}}"#,
        )
        .unwrap();
        let b = load_config(
            r#"{"network": {"star": {"n": 4}},
                "payoff": {"beta": 0.2},
                "prior": {"common": {"sigma": 0.1, "sigma0": 0.3, "mu0": 1.0}}}"#,
        )
        .unwrap();
        assert_eq!(a.canonical_json, b.canonical_json);
    }
}
