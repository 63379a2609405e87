//! Ex-post disclosure-preference simulation on star networks.
//!
//! For each coupling value and each realized prior mean, draws payoff states
//! and averages the realized utility change between full-disclosure actions
//! `g x` and no-disclosure actions anchored either at the realized mean
//! (`mu x`) or at the hyper-prior mean (`mu0 x`).
//!
//! Randomness is a counter-based stream keyed by
//! `(seed, beta index, mu index, draw index)`, so results are independent of
//! execution order and bit-reproducible for a fixed seed.

use crate::error::{CoreError, Result};
use crate::game::{GameSpec, StatePrior};
use crate::preference::h_inverse_ones;
use crate::report::{fmt_bool, fmt_g9};

// ---------------------------------------------------------------------------
// Counter-based RNG.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Derive a stream key from a seed and a list of stream identifiers.
pub fn stream_key(seed: u64, ids: &[u64]) -> u64 {
    let mut k = mix(seed ^ 0xA076_1D64_78BD_642F);
    for &id in ids {
        k = mix(k ^ id.wrapping_mul(GOLDEN).wrapping_add(0x2545_F491_4F6C_DD1D));
    }
    k
}

/// Uniform draw in the open interval (0, 1) at a given counter.
fn uniform01(key: u64, counter: u64) -> f64 {
    let bits = mix(key ^ counter.wrapping_mul(GOLDEN));
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box-Muller; each counter owns two uniforms.
pub fn standard_normal(key: u64, counter: u64) -> f64 {
    let u1 = uniform01(key, 2 * counter);
    let u2 = uniform01(key, 2 * counter + 1);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

const TAG_MU: u64 = 0;
const TAG_GAMMA: u64 = 1;

// ---------------------------------------------------------------------------
// Configuration and results.

/// Which action profile the "no disclosure" side of the comparison uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// No-disclosure actions at the realized prior mean `mu x`.
    RealizedMu,
    /// No-disclosure actions at the hyper-prior mean `mu0 x`. The averaged
    /// realized-mean form has expectation `sigma^2 H_ii x_i^2 >= 0` for every
    /// realized mean, so it cannot produce negative hub curves; this variant
    /// can, and is the default for figure reproduction.
    HyperPriorMu0,
}

impl Anchor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RealizedMu => "realized",
            Self::HyperPriorMu0 => "mu0",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    /// Star game template; the coupling is swept over `beta_grid`.
    pub spec: GameSpec,
    pub beta_grid: Vec<f64>,
    pub mu_draw_count: usize,
    pub gamma_draw_count: usize,
    pub seed: u64,
    pub anchor: Anchor,
}

impl SimulationConfig {
    /// Stable digest of the configuration (FNV-1a over a canonical rendering).
    pub fn digest(&self) -> String {
        let (mu0, sigma0, sigma) = match self.spec.prior() {
            StatePrior::CommonHierarchical { mu0, sigma0, sigma } => (*mu0, *sigma0, *sigma),
            StatePrior::GeneralGaussian { .. } => (f64::NAN, f64::NAN, f64::NAN),
        };
        let mut canon = format!(
            "n={};mu0={:e};sigma0={:e};sigma={:e};mu_draws={};gamma_draws={};seed={};anchor={};grid=",
            self.spec.n(),
            mu0,
            sigma0,
            sigma,
            self.mu_draw_count,
            self.gamma_draw_count,
            self.seed,
            self.anchor.as_str(),
        );
        for b in &self.beta_grid {
            canon.push_str(&format!("{b:e},"));
        }
        format!("{:016x}", fnv1a64(canon.as_bytes()))
    }

    fn validate(&self) -> Result<(f64, f64, f64)> {
        if self.mu_draw_count < 1 || self.gamma_draw_count < 1 {
            return Err(CoreError::InvalidSpec(
                "draw counts must be at least 1".into(),
            ));
        }
        if self.spec.n() < 3 {
            return Err(CoreError::InvalidSpec(
                "the ex-post sweep runs on star networks with n >= 3".into(),
            ));
        }
        match self.spec.prior() {
            StatePrior::CommonHierarchical { mu0, sigma0, sigma } => Ok((*mu0, *sigma0, *sigma)),
            StatePrior::GeneralGaussian { .. } => Err(CoreError::NonCommonPrior),
        }
    }
}

/// FNV-1a 64-bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325_u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentRole {
    Central,
    Peripheral,
}

impl AgentRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Central => "central",
            Self::Peripheral => "peripheral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    Singular,
}

#[derive(Debug, Clone)]
pub struct SimRow {
    pub beta: f64,
    /// 1-based index of the sorted realized prior means.
    pub mu_index: usize,
    pub mu: f64,
    pub agent_role: AgentRole,
    pub mean_delta_u: f64,
    pub std_error: f64,
    pub draws: usize,
    pub status: CellStatus,
}

#[derive(Debug, Clone)]
pub struct RunManifestInfo {
    pub seed: u64,
    pub config_hash: String,
    pub code_version: &'static str,
    pub anchor: Anchor,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub rows: Vec<SimRow>,
    pub manifest: RunManifestInfo,
}

// ---------------------------------------------------------------------------
// The realized utility change.

/// Realized utility change of agent `i` between full disclosure (actions
/// `g x`) and the anchored no-disclosure profile, with the residual payoff
/// term zero.
pub fn delta_u_expost(
    spec: &GameSpec,
    x: &nalgebra::DVector<f64>,
    i: usize,
    gamma: f64,
    mu: f64,
    anchor: Anchor,
) -> Result<f64> {
    let n = spec.n();
    if i >= n {
        return Err(CoreError::AgentIndexOutOfRange { index: i, n });
    }
    let m = match anchor {
        Anchor::RealizedMu => mu,
        Anchor::HyperPriorMu0 => match spec.prior() {
            StatePrior::CommonHierarchical { mu0, .. } => *mu0,
            StatePrior::GeneralGaussian { .. } => return Err(CoreError::NonCommonPrior),
        },
    };
    let h = spec.h();
    let cross: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)] * x[j]).sum();
    // (g - m) x_i [ (g + m)(-H_ii x_i - 2 sum_j H_ij x_j) + 2 g ]
    Ok((gamma - m) * x[i] * ((gamma + m) * (-h[(i, i)] * x[i] - 2.0 * cross) + 2.0 * gamma))
}

// ---------------------------------------------------------------------------
// The sweep.

/// Run the seeded sweep over `(beta, mu)` cells.
///
/// Cells are independent: each owns its RNG stream, and output rows are
/// sorted by `(beta, mu_index, role)` before emission, so any execution
/// order produces identical results. Singular couplings are recorded with a
/// failed status instead of aborting the sweep.
pub fn run_expost(config: &SimulationConfig) -> Result<SimulationRun> {
    let (mu0, sigma0, sigma) = config.validate()?;
    let n = config.spec.n();

    // Realized prior means, sorted ascending for stable line labels.
    let mu_key = stream_key(config.seed, &[TAG_MU]);
    let mut mus: Vec<f64> = (0..config.mu_draw_count)
        .map(|j| mu0 + sigma0 * standard_normal(mu_key, j as u64))
        .collect();
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut rows = Vec::with_capacity(config.beta_grid.len() * mus.len() * 2);
    for (beta_idx, &beta) in config.beta_grid.iter().enumerate() {
        let star = crate::game::build_star(n, beta, config.spec.prior().clone())?;
        let x = match h_inverse_ones(&star) {
            Ok(x) => Some(x),
            Err(CoreError::NearSingular { .. }) => None,
            Err(e) => return Err(e),
        };
        for (mu_pos, &mu) in mus.iter().enumerate() {
            let mu_index = mu_pos + 1;
            match &x {
                None => {
                    for role in [AgentRole::Central, AgentRole::Peripheral] {
                        rows.push(SimRow {
                            beta,
                            mu_index,
                            mu,
                            agent_role: role,
                            mean_delta_u: f64::NAN,
                            std_error: f64::NAN,
                            draws: 0,
                            status: CellStatus::Singular,
                        });
                    }
                }
                Some(x) => {
                    let key = stream_key(
                        config.seed,
                        &[TAG_GAMMA, beta_idx as u64, mu_pos as u64],
                    );
                    // Welford accumulators: agent 0 is the hub, agent 1 a
                    // representative spoke; both share the same draws.
                    let mut acc = [(0.0_f64, 0.0_f64); 2];
                    let draws = config.gamma_draw_count;
                    for d in 0..draws {
                        let gamma = mu + sigma * standard_normal(key, d as u64);
                        for (agent, slot) in acc.iter_mut().enumerate() {
                            let du = delta_u_expost(&star, x, agent, gamma, mu, config.anchor)?;
                            let (mean, m2) = *slot;
                            let count = (d + 1) as f64;
                            let delta = du - mean;
                            let mean_new = mean + delta / count;
                            *slot = (mean_new, m2 + delta * (du - mean_new));
                        }
                    }
                    for (slot, role) in [AgentRole::Central, AgentRole::Peripheral]
                        .into_iter()
                        .enumerate()
                    {
                        let (mean, m2) = acc[slot];
                        let std_error = if draws >= 2 {
                            (m2 / (draws as f64 - 1.0)).sqrt() / (draws as f64).sqrt()
                        } else {
                            0.0
                        };
                        rows.push(SimRow {
                            beta,
                            mu_index,
                            mu,
                            agent_role: role,
                            mean_delta_u: mean,
                            std_error,
                            draws,
                            status: CellStatus::Ok,
                        });
                    }
                }
            }
        }
    }

    rows.sort_by(|a, b| {
        a.beta
            .partial_cmp(&b.beta)
            .unwrap()
            .then(a.mu_index.cmp(&b.mu_index))
            .then((a.agent_role == AgentRole::Peripheral).cmp(&(b.agent_role == AgentRole::Peripheral)))
    });

    Ok(SimulationRun {
        rows,
        manifest: RunManifestInfo {
            seed: config.seed,
            config_hash: config.digest(),
            code_version: env!("CARGO_PKG_VERSION"),
            anchor: config.anchor,
        },
    })
}

pub const SIM_CSV_HEADER: &str =
    "beta,mu_index,mu,mu_below_mu0,agent_role,mean_delta_u,std_error,draws,status";

/// Render rows (optionally filtered by role) as CSV.
pub fn run_csv(run: &SimulationRun, mu0: f64, role: Option<AgentRole>) -> String {
    let mut out = String::from(SIM_CSV_HEADER);
    out.push('\n');
    for r in &run.rows {
        if let Some(want) = role {
            if r.agent_role != want {
                continue;
            }
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_g9(r.beta),
            r.mu_index,
            fmt_g9(r.mu),
            fmt_bool(r.mu < mu0),
            r.agent_role.as_str(),
            fmt_g9(r.mean_delta_u),
            fmt_g9(r.std_error),
            r.draws,
            match r.status {
                CellStatus::Ok => "ok",
                CellStatus::Singular => "singular",
            },
        ));
    }
    out
}

/// The two per-role figure tables (central, peripheral).
pub fn role_tables(run: &SimulationRun, mu0: f64) -> (String, String) {
    (
        run_csv(run, mu0, Some(AgentRole::Central)),
        run_csv(run, mu0, Some(AgentRole::Peripheral)),
    )
}

/// The default sweep used for figure reproduction.
pub fn default_beta_grid() -> Vec<f64> {
    vec![-0.5, -0.4, -0.3, -0.2, -0.1, 0.1, 0.2, 0.3, 0.4, 0.5]
}
