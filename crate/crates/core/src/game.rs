//! Game instances: network topology, quadratic payoff coefficients, Gaussian
//! state priors, payoff evaluation, and welfare.
//!
//! Payoffs are quadratic in actions with a linear state term,
//! `u_i = -H_ii a_i^2 - 2 sum_{j != i} H_ij a_i a_j + 2 g_i a_i (+ d_i)`,
//! and every analysis in this crate fixes the residual term `d_i` to zero
//! (the `residual_term_zero` flag). The Bertrand mapping is the one place a
//! nonzero `d_i` arises; it is returned symbolically there.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::linalg;

/// Undirected interaction graph on agents `0..n` (externally 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkTopology {
    n: usize,
    /// Edges stored as 0-based `(i, j)` with `i < j`.
    edges: BTreeSet<(usize, usize)>,
}

impl NetworkTopology {
    /// Build from 1-based unordered pairs, rejecting self-loops and
    /// out-of-range indices.
    pub fn from_edges_1based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidSpec("agent count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(CoreError::InvalidSpec(format!(
                    "self-loop on agent {a} is not allowed"
                )));
            }
            if a < 1 || a > n || b < 1 || b > n {
                return Err(CoreError::InvalidSpec(format!(
                    "edge ({a},{b}) references an agent outside 1..={n}"
                )));
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            set.insert((lo - 1, hi - 1));
        }
        Ok(Self { n, edges: set })
    }

    /// Star on `n` agents with agent 0 as the hub.
    pub fn star(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(CoreError::InvalidSpec(format!(
                "a star network needs at least 3 agents, got n={n}"
            )));
        }
        let edges = (1..n).map(|j| (0, j)).collect();
        Ok(Self { n, edges })
    }

    /// Complete graph on `n` agents.
    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidSpec("agent count must be positive".into()));
        }
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.insert((i, j));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.edges.contains(&(lo, hi))
    }

    /// 0-based edge pairs, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// 0-based neighbor list of agent `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| j != i && self.has_edge(i, j))
            .collect()
    }

    /// True when the graph is exactly a star with agent 0 as the hub.
    pub fn is_star(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n - 1
            && (1..self.n).all(|j| self.has_edge(0, j))
    }
}

/// Dense payoff coefficient matrix `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    entries: DMatrix<f64>,
}

impl PayoffMatrix {
    /// Validate `H` against a topology: strict concavity (`H_ii > 0`) and
    /// zero coupling off the edge set.
    pub fn new(entries: DMatrix<f64>, topology: &NetworkTopology) -> Result<Self> {
        let n = topology.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(CoreError::InvalidSpec(format!(
                "payoff matrix is {}x{}, expected {n}x{n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..n {
            if entries[(i, i)] <= 0.0 {
                return Err(CoreError::InvalidSpec(format!(
                    "H[{},{}] = {} must be strictly positive",
                    i + 1,
                    i + 1,
                    entries[(i, i)]
                )));
            }
            for j in 0..n {
                if i != j && !topology.has_edge(i, j) && entries[(i, j)] != 0.0 {
                    return Err(CoreError::InvalidSpec(format!(
                        "H[{},{}] = {} is nonzero but ({},{}) is not an edge",
                        i + 1,
                        j + 1,
                        entries[(i, j)],
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

/// Gaussian prior over the payoff state vector.
#[derive(Debug, Clone, PartialEq)]
pub enum StatePrior {
    /// Common scalar state g for all agents, g ~ psi(mu, sigma^2) with the
    /// mean itself drawn as mu ~ psi(mu0, sigma0^2).
    CommonHierarchical { mu0: f64, sigma0: f64, sigma: f64 },
    /// Arbitrary jointly Gaussian state vector.
    GeneralGaussian {
        mu: DVector<f64>,
        sigma: DMatrix<f64>,
    },
}

/// Eigenvalue floor below which a covariance matrix is rejected.
const COVARIANCE_EIG_FLOOR: f64 = -1e-10;

impl StatePrior {
    pub fn common(mu0: f64, sigma0: f64, sigma: f64) -> Result<Self> {
        if sigma0 < 0.0 || sigma < 0.0 {
            return Err(CoreError::InvalidSpec(format!(
                "prior standard deviations must be nonnegative, got sigma0={sigma0}, sigma={sigma}"
            )));
        }
        Ok(Self::CommonHierarchical { mu0, sigma0, sigma })
    }

    pub fn general(mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() || sigma.nrows() != mu.len() {
            return Err(CoreError::InvalidSpec(
                "state covariance must be square and match the mean dimension".into(),
            ));
        }
        if (&sigma - sigma.transpose()).abs().max() > 1e-10 {
            return Err(CoreError::InvalidSpec(
                "state covariance must be symmetric".into(),
            ));
        }
        let min_eig = linalg::min_eigenvalue(&sigma);
        if min_eig < COVARIANCE_EIG_FLOOR {
            return Err(CoreError::InvalidSpec(format!(
                "state covariance has eigenvalue {min_eig:.3e} below the PSD tolerance"
            )));
        }
        Ok(Self::GeneralGaussian { mu, sigma })
    }

    /// Marginal covariance of the state vector for `n` agents.
    ///
    /// A common state has var(g_i) = cov(g_i, g_j) = sigma^2 + sigma0^2 for
    /// every pair, i.e. a rank-one all-ones structure.
    pub fn state_covariance(&self, n: usize) -> Result<DMatrix<f64>> {
        match self {
            Self::CommonHierarchical { sigma0, sigma, .. } => {
                let v = sigma * sigma + sigma0 * sigma0;
                Ok(DMatrix::from_element(n, n, v))
            }
            Self::GeneralGaussian { sigma, .. } => {
                if sigma.nrows() != n {
                    return Err(CoreError::InvalidSpec(format!(
                        "prior dimension {} does not match n={n}",
                        sigma.nrows()
                    )));
                }
                Ok(sigma.clone())
            }
        }
    }

    /// Mean of the state vector for `n` agents.
    pub fn state_mean(&self, n: usize) -> Result<DVector<f64>> {
        match self {
            Self::CommonHierarchical { mu0, .. } => Ok(DVector::from_element(n, *mu0)),
            Self::GeneralGaussian { mu, .. } => {
                if mu.len() != n {
                    return Err(CoreError::InvalidSpec(format!(
                        "prior dimension {} does not match n={n}",
                        mu.len()
                    )));
                }
                Ok(mu.clone())
            }
        }
    }
}

/// A complete game instance.
#[derive(Debug, Clone)]
pub struct GameSpec {
    topology: NetworkTopology,
    payoff: PayoffMatrix,
    prior: StatePrior,
    /// Whether the residual payoff term `d_i` is identically zero. All payoff
    /// and welfare evaluations require this.
    residual_term_zero: bool,
}

impl GameSpec {
    pub fn new(topology: NetworkTopology, payoff: PayoffMatrix, prior: StatePrior) -> Result<Self> {
        if payoff.n() != topology.n() {
            return Err(CoreError::InvalidSpec(format!(
                "payoff dimension {} does not match topology n={}",
                payoff.n(),
                topology.n()
            )));
        }
        if let StatePrior::GeneralGaussian { mu, .. } = &prior {
            if mu.len() != topology.n() {
                return Err(CoreError::InvalidSpec(format!(
                    "prior dimension {} does not match topology n={}",
                    mu.len(),
                    topology.n()
                )));
            }
        }
        Ok(Self {
            topology,
            payoff,
            prior,
            residual_term_zero: true,
        })
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn payoff(&self) -> &PayoffMatrix {
        &self.payoff
    }

    /// The coefficient matrix `H`.
    pub fn h(&self) -> &DMatrix<f64> {
        self.payoff.matrix()
    }

    pub fn prior(&self) -> &StatePrior {
        &self.prior
    }

    pub fn residual_term_zero(&self) -> bool {
        self.residual_term_zero
    }

    fn with_residual_term(mut self, zero: bool) -> Self {
        self.residual_term_zero = zero;
        self
    }
}

/// Parameters of the networked Bertrand market example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BertrandParams {
    /// Demand intercept.
    pub theta: f64,
    /// Own-price demand slope.
    pub varpi: f64,
    /// Cross-price demand slope.
    pub varrho: f64,
}

impl BertrandParams {
    pub fn new(theta: f64, varpi: f64, varrho: f64) -> Result<Self> {
        if theta <= 0.0 || varpi <= 0.0 || varrho <= 0.0 {
            return Err(CoreError::InvalidSpec(format!(
                "Bertrand parameters must be strictly positive, got theta={theta}, varpi={varpi}, varrho={varrho}"
            )));
        }
        Ok(Self {
            theta,
            varpi,
            varrho,
        })
    }

    /// Demand faced by firm `i` given a price profile (neighbors only).
    pub fn demand(&self, topology: &NetworkTopology, a: &DVector<f64>, i: usize) -> f64 {
        let cross: f64 = topology.neighbors(i).iter().map(|&j| a[j]).sum();
        self.theta - self.varpi * a[i] + self.varrho * cross
    }

    /// Profit of firm `i`: revenue `q_i a_i` minus production cost `g_i q_i`.
    pub fn profit(&self, topology: &NetworkTopology, a: &DVector<f64>, gamma: &DVector<f64>, i: usize) -> f64 {
        let q = self.demand(topology, a, i);
        q * a[i] - gamma[i] * q
    }
}

/// Affine state transform `g -> intercept + slope * g` produced by the
/// Bertrand mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineStateMap {
    pub intercept: f64,
    pub slope: f64,
}

impl AffineStateMap {
    pub fn apply(&self, gamma: f64) -> f64 {
        self.intercept + self.slope * gamma
    }

    /// Push a prior on the original state through the map.
    pub fn transform_prior(&self, prior: &StatePrior) -> Result<StatePrior> {
        let s = self.slope.abs();
        match prior {
            StatePrior::CommonHierarchical { mu0, sigma0, sigma } => {
                StatePrior::common(self.apply(*mu0), s * sigma0, s * sigma)
            }
            StatePrior::GeneralGaussian { mu, sigma } => {
                let new_mu = mu.map(|m| self.apply(m));
                let new_sigma = sigma * (self.slope * self.slope);
                StatePrior::general(new_mu, new_sigma)
            }
        }
    }
}

/// Residual payoff term of the Bertrand game, kept symbolic:
/// `d_i = -theta g_i - varrho g_i sum_{j in N_i} a_j`.
#[derive(Debug, Clone)]
pub struct BertrandResidual {
    params: BertrandParams,
    topology: NetworkTopology,
}

impl BertrandResidual {
    pub fn describe(&self) -> String {
        format!(
            "d_i = -{theta} * g_i - {rho} * g_i * sum_{{j in N_i}} a_j",
            theta = self.params.theta,
            rho = self.params.varrho
        )
    }

    pub fn eval(&self, a: &DVector<f64>, gamma: &DVector<f64>, i: usize) -> f64 {
        let cross: f64 = self.topology.neighbors(i).iter().map(|&j| a[j]).sum();
        -gamma[i] * self.params.theta - gamma[i] * self.params.varrho * cross
    }
}

/// Result of rewriting a Bertrand market as a quadratic network game.
#[derive(Debug, Clone)]
pub struct BertrandLqg {
    pub spec: GameSpec,
    pub state_map: AffineStateMap,
    pub residual: BertrandResidual,
}

/// Star game: agent 0 central, `H_ii = 1`, hub-spoke couplings `beta`.
pub fn build_star(n: usize, beta: f64, prior: StatePrior) -> Result<GameSpec> {
    let topology = NetworkTopology::star(n)?;
    let mut h = DMatrix::identity(n, n);
    for j in 1..n {
        h[(0, j)] = beta;
        h[(j, 0)] = beta;
    }
    let payoff = PayoffMatrix::new(h, &topology)?;
    GameSpec::new(topology, payoff, prior)
}

/// Expand Bertrand profits into the quadratic payoff template.
///
/// `u_i = q_i a_i - g_i q_i` with `q_i = theta - varpi a_i + varrho sum_{j in N_i} a_j`
/// matches the template with `H_ii = varpi`, `H_ij = -varrho/2` on edges, a
/// transformed state `g~ = (theta + varpi g)/2`, and residual
/// `d_i = -theta g_i - varrho g_i sum_{j in N_i} a_j`.
pub fn bertrand_to_lqg(
    params: BertrandParams,
    topology: NetworkTopology,
    cost_prior: &StatePrior,
) -> Result<BertrandLqg> {
    let n = topology.n();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = params.varpi;
    }
    for (i, j) in topology.edges() {
        h[(i, j)] = -params.varrho / 2.0;
        h[(j, i)] = -params.varrho / 2.0;
    }
    let state_map = AffineStateMap {
        intercept: params.theta / 2.0,
        slope: params.varpi / 2.0,
    };
    let prior = state_map.transform_prior(cost_prior)?;
    let payoff = PayoffMatrix::new(h, &topology)?;
    let spec = GameSpec::new(topology.clone(), payoff, prior)?.with_residual_term(false);
    Ok(BertrandLqg {
        spec,
        state_map,
        residual: BertrandResidual { params, topology },
    })
}

/// Payoff of agent `i` (0-based) with the residual term fixed at zero.
pub fn utility(spec: &GameSpec, a: &DVector<f64>, gamma: &DVector<f64>, i: usize) -> Result<f64> {
    let n = spec.n();
    if i >= n {
        return Err(CoreError::AgentIndexOutOfRange { index: i, n });
    }
    if a.len() != n || gamma.len() != n {
        return Err(CoreError::InvalidSpec(format!(
            "action/state vectors must have length {n}"
        )));
    }
    if !spec.residual_term_zero() {
        return Err(CoreError::InvalidSpec(
            "payoff evaluation requires the residual term to be zero".into(),
        ));
    }
    let h = spec.h();
    let cross: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)] * a[j]).sum();
    Ok(-h[(i, i)] * a[i] * a[i] - 2.0 * a[i] * cross + 2.0 * gamma[i] * a[i])
}

/// Aggregate payoff over all agents.
pub fn welfare(spec: &GameSpec, a: &DVector<f64>, gamma: &DVector<f64>) -> Result<f64> {
    (0..spec.n()).map(|i| utility(spec, a, gamma, i)).sum()
}

/// Strategic coupling of an edge, read off the cross-partial
/// `d^2 u_i / (d a_i d a_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingLabel {
    Complements,
    Substitutes,
    Decoupled,
}

impl std::fmt::Display for CouplingLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Complements => write!(f, "complements"),
            Self::Substitutes => write!(f, "substitutes"),
            Self::Decoupled => write!(f, "decoupled"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCoupling {
    /// 0-based endpoints, `i < j`.
    pub i: usize,
    pub j: usize,
    /// Symmetrized cross-partial `-(H_ij + H_ji)`.
    pub cross_partial: f64,
    pub label: CouplingLabel,
}

/// Classify every edge by the sign of the payoff cross-partial.
///
/// Note this is the opposite of the coupling coefficient's own sign: positive
/// `H_ij` means the cross-partial `-2 H_ij` is negative, i.e. substitutes.
pub fn classify_coupling(spec: &GameSpec) -> Vec<EdgeCoupling> {
    let h = spec.h();
    spec.topology()
        .edges()
        .map(|(i, j)| {
            let cp = -(h[(i, j)] + h[(j, i)]);
            let label = if cp > 0.0 {
                CouplingLabel::Complements
            } else if cp < 0.0 {
                CouplingLabel::Substitutes
            } else {
                CouplingLabel::Decoupled
            };
            EdgeCoupling {
                i,
                j,
                cross_partial: cp,
                label,
            }
        })
        .collect()
}

/// Definiteness and dominance diagnostics for the coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinitenessReport {
    pub is_positive_definite: bool,
    pub is_diag_dominant: bool,
    pub min_eigenvalue: f64,
}

/// Positive definiteness of `(H + H^T)/2` via eigenvalues, plus the strict
/// diagonal dominance check `H_ii > sum_{j != i} |H_ij|`.
pub fn definiteness_report(spec: &GameSpec) -> DefinitenessReport {
    let h = spec.h();
    let n = spec.n();
    let min_eigenvalue = linalg::min_eigenvalue(h);
    let is_diag_dominant = (0..n).all(|i| {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)].abs()).sum();
        h[(i, i)] > off
    });
    DefinitenessReport {
        is_positive_definite: min_eigenvalue > 0.0,
        is_diag_dominant,
        min_eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_prior() -> StatePrior {
        StatePrior::common(1.0, 0.3, 0.1).unwrap()
    }

    pub(crate) fn star(n: usize, beta: f64) -> GameSpec {
        build_star(n, beta, StatePrior::common(1.0, 0.3, 0.1).unwrap()).unwrap()
    }

    #[test]
    fn build_star_n4_beta02_matches_expected_entries() {
        let spec = star(4, 0.2);
        let h = spec.h();
        for i in 0..4 {
            assert_eq!(h[(i, i)], 1.0);
        }
        for j in 1..4 {
            assert_eq!(h[(0, j)], 0.2);
            assert_eq!(h[(j, 0)], 0.2);
        }
        assert_eq!(h[(1, 2)], 0.0);
        assert_eq!(h[(2, 3)], 0.0);
    }

    #[test]
    fn build_star_beta_zero_is_identity() {
        let spec = star(3, 0.0);
        assert_eq!(spec.h(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn build_star_negative_beta_is_positive_definite() {
        // 3 * 0.3^2 = 0.27 < 1, so min eigenvalue 1 - sqrt(3)*0.3 > 0.
        let spec = star(4, -0.3);
        let report = definiteness_report(&spec);
        assert!(report.is_positive_definite);
        assert!((report.min_eigenvalue - (1.0 - 3.0_f64.sqrt() * 0.3)).abs() < 1e-12);
    }

    #[test]
    fn build_star_rejects_small_n() {
        assert!(build_star(2, 0.1, default_prior()).is_err());
    }

    #[test]
    fn star_spectrum_matches_closed_form() {
        for &(n, beta) in &[(3usize, 0.2), (4, -0.3), (10, 0.05), (20, -0.04)] {
            let spec = star(n, beta);
            let mut expected: Vec<f64> = vec![1.0; n - 2];
            let shift = ((n - 1) as f64).sqrt() * beta;
            expected.push(1.0 - shift);
            expected.push(1.0 + shift);
            expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let got = linalg::symmetrized_eigenvalues(spec.h());
            for (g, e) in got.iter().zip(expected.iter()) {
                assert!((g - e).abs() < 1e-9, "n={n} beta={beta}: {g} vs {e}");
            }
        }
    }

    #[test]
    fn utility_single_agent_identity() {
        let topology = NetworkTopology::complete(1).unwrap();
        let payoff = PayoffMatrix::new(DMatrix::identity(1, 1), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, default_prior()).unwrap();
        let a = DVector::from_vec(vec![1.0]);
        let g = DVector::from_vec(vec![1.0]);
        assert_eq!(utility(&spec, &a, &g, 0).unwrap(), 1.0);
    }

    #[test]
    fn utility_star_hand_evaluations() {
        let spec = star(4, 0.2);
        let a = DVector::from_element(4, 1.0);
        let g = DVector::from_element(4, 1.0);
        // Central: -1 - 2*(3*0.2) + 2 = -0.2. Peripheral: -1 - 2*0.2 + 2 = 0.6.
        assert!((utility(&spec, &a, &g, 0).unwrap() - (-0.2)).abs() < 1e-12);
        assert!((utility(&spec, &a, &g, 1).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn utility_rejects_bad_index() {
        let spec = star(4, 0.2);
        let a = DVector::from_element(4, 1.0);
        assert!(matches!(
            utility(&spec, &a, &a, 4),
            Err(CoreError::AgentIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn welfare_decoupled_case() {
        let topology = NetworkTopology::complete(4).unwrap();
        let payoff = PayoffMatrix::new(DMatrix::identity(4, 4), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, default_prior()).unwrap();
        let ones = DVector::from_element(4, 1.0);
        assert!((welfare(&spec, &ones, &ones).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn welfare_zero_actions_is_zero() {
        let spec = star(5, -0.2);
        let zero = DVector::zeros(5);
        let g = DVector::from_element(5, 0.7);
        assert_eq!(welfare(&spec, &zero, &g).unwrap(), 0.0);
    }

    #[test]
    fn welfare_at_full_disclosure_equilibrium() {
        // a = g * H^-1 1 at g = 1 gives welfare sum_i H_ii x_i^2.
        let spec = star(4, 0.2);
        let x = spec
            .h()
            .clone()
            .lu()
            .solve(&DVector::from_element(4, 1.0))
            .unwrap();
        let g = DVector::from_element(4, 1.0);
        let w = welfare(&spec, &x, &g).unwrap();
        let expected: f64 = (0..4).map(|i| spec.h()[(i, i)] * x[i] * x[i]).sum();
        assert!((w - expected).abs() < 1e-12);
        assert!((w - 2.685950413).abs() < 1e-6);
    }

    #[test]
    fn classify_star_couplings() {
        let subs = classify_coupling(&star(4, 0.2));
        assert!(subs
            .iter()
            .all(|e| e.label == CouplingLabel::Substitutes && (e.cross_partial + 0.4).abs() < 1e-15));

        let comps = classify_coupling(&star(4, -0.3));
        assert!(comps.iter().all(|e| e.label == CouplingLabel::Complements));

        let dec = classify_coupling(&star(4, 0.0));
        assert!(dec.iter().all(|e| e.label == CouplingLabel::Decoupled));
    }

    #[test]
    fn coupling_label_flips_when_beta_negates() {
        for beta in [0.05, 0.15, 0.3] {
            let pos = classify_coupling(&star(5, beta));
            let neg = classify_coupling(&star(5, -beta));
            for (p, q) in pos.iter().zip(neg.iter()) {
                assert_eq!(p.label, CouplingLabel::Substitutes);
                assert_eq!(q.label, CouplingLabel::Complements);
                assert!((p.cross_partial + q.cross_partial).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn definiteness_identity_matrix() {
        let topology = NetworkTopology::complete(3).unwrap();
        let payoff = PayoffMatrix::new(DMatrix::identity(3, 3), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, default_prior()).unwrap();
        let rep = definiteness_report(&spec);
        assert!(rep.is_positive_definite);
        assert!(rep.is_diag_dominant);
        assert!((rep.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn definiteness_star_beta_half() {
        // (n-1)|beta| = 1.5 > 1 breaks diagonal dominance, but the spectral
        // condition sqrt(3)*0.5 < 1 keeps the matrix positive definite.
        let rep = definiteness_report(&star(4, 0.5));
        assert!(!rep.is_diag_dominant);
        assert!(rep.is_positive_definite);
        assert!((rep.min_eigenvalue - (1.0 - 3.0_f64.sqrt() * 0.5)).abs() < 1e-12);

        // Past |beta| = 1/sqrt(3) definiteness is lost as well.
        let rep = definiteness_report(&star(4, 0.6));
        assert!(!rep.is_diag_dominant);
        assert!(!rep.is_positive_definite);
    }

    #[test]
    fn definiteness_star_beta_03_is_dominant() {
        let rep = definiteness_report(&star(4, 0.3));
        assert!(rep.is_diag_dominant);
        assert!(rep.is_positive_definite);
    }

    #[test]
    fn bertrand_mapping_star_example() {
        let params = BertrandParams::new(1.0, 1.0, 0.5).unwrap();
        let topology = NetworkTopology::star(4).unwrap();
        let out = bertrand_to_lqg(params, topology, &default_prior()).unwrap();
        let h = out.spec.h();
        for i in 0..4 {
            assert_eq!(h[(i, i)], 1.0);
        }
        for j in 1..4 {
            assert_eq!(h[(0, j)], -0.25);
        }
        assert_eq!(out.state_map.apply(0.0), 0.5);
        assert_eq!(out.state_map.apply(1.0), 1.0);
        assert!(!out.spec.residual_term_zero());
    }

    #[test]
    fn bertrand_cross_partial_is_complements() {
        let params = BertrandParams::new(2.0, 1.5, 0.7).unwrap();
        let topology = NetworkTopology::star(5).unwrap();
        let out = bertrand_to_lqg(params, topology, &default_prior()).unwrap();
        for edge in classify_coupling(&out.spec) {
            assert_eq!(edge.label, CouplingLabel::Complements);
            assert!((edge.cross_partial - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn bertrand_round_trip_profit_equals_quadratic_form() {
        // Deterministic pseudo-random evaluation points.
        let params = BertrandParams::new(1.0, 1.0, 0.5).unwrap();
        let topology = NetworkTopology::star(4).unwrap();
        let out = bertrand_to_lqg(params, topology.clone(), &default_prior()).unwrap();

        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 4.0 - 2.0
        };

        for _ in 0..100 {
            let a = DVector::from_fn(4, |_, _| next());
            let gamma = DVector::from_fn(4, |_, _| next());
            for i in 0..4 {
                let direct = params.profit(&topology, &a, &gamma, i);
                // Quadratic template with transformed state plus residual.
                let h = out.spec.h();
                let cross: f64 = (0..4).filter(|&j| j != i).map(|j| h[(i, j)] * a[j]).sum();
                let gt = out.state_map.apply(gamma[i]);
                let template = -h[(i, i)] * a[i] * a[i] - 2.0 * a[i] * cross
                    + 2.0 * gt * a[i]
                    + out.residual.eval(&a, &gamma, i);
                assert!(
                    (direct - template).abs() < 1e-10,
                    "mismatch at agent {i}: {direct} vs {template}"
                );
            }
        }
    }

    #[test]
    fn bertrand_rho_to_zero_decouples() {
        let params = BertrandParams::new(1.0, 1.0, 1e-300).unwrap();
        let topology = NetworkTopology::star(4).unwrap();
        let out = bertrand_to_lqg(params, topology, &default_prior()).unwrap();
        let h = out.spec.h();
        for j in 1..4 {
            assert!(h[(0, j)].abs() <= 5e-301);
        }
        assert_eq!(out.state_map.apply(1.0), 1.0);
    }

    #[test]
    fn topology_rejects_self_loops_and_bad_indices() {
        assert!(NetworkTopology::from_edges_1based(3, &[(1, 1)]).is_err());
        assert!(NetworkTopology::from_edges_1based(3, &[(1, 4)]).is_err());
        assert!(NetworkTopology::from_edges_1based(3, &[(0, 2)]).is_err());
        let t = NetworkTopology::from_edges_1based(3, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(t.edges().count(), 1);
    }

    #[test]
    fn payoff_matrix_rejects_off_edge_coupling() {
        let topology = NetworkTopology::star(3).unwrap();
        let mut h = DMatrix::identity(3, 3);
        h[(1, 2)] = 0.5;
        assert!(PayoffMatrix::new(h, &topology).is_err());
    }

    #[test]
    fn payoff_matrix_rejects_nonpositive_diagonal() {
        let topology = NetworkTopology::complete(2).unwrap();
        let mut h = DMatrix::identity(2, 2);
        h[(1, 1)] = 0.0;
        assert!(PayoffMatrix::new(h, &topology).is_err());
    }

    #[test]
    fn prior_rejects_asymmetric_covariance() {
        let mu = DVector::zeros(2);
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(StatePrior::general(mu, sigma).is_err());
    }

    #[test]
    fn common_prior_covariance_is_rank_one() {
        let prior = StatePrior::common(1.0, 0.3, 0.1).unwrap();
        let cov = prior.state_covariance(3).unwrap();
        for v in cov.iter() {
            assert!((v - 0.10).abs() < 1e-15);
        }
    }
}
