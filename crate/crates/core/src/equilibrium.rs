//! Bayesian Nash equilibria under no, full, and public noisy disclosure.
//!
//! With a common payoff state and public signals the equilibrium action
//! profile is `E[g | info] * H^-1 1`; full and no disclosure are the
//! special cases where the conditional mean is the realized state or the
//! prior mean.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::game::{GameSpec, StatePrior};
use crate::linalg;

/// What the designer reveals about the payoff state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisclosurePolicy {
    NoDisclosure,
    FullDisclosure,
    /// A single public signal `w = g + noise`, noise variance `noise_var`.
    PublicNoisy { noise_var: f64 },
}

impl DisclosurePolicy {
    pub fn public_noisy(noise_var: f64) -> Result<Self> {
        if noise_var < 0.0 {
            return Err(CoreError::InvalidSpec(format!(
                "signal noise variance must be nonnegative, got {noise_var}"
            )));
        }
        Ok(Self::PublicNoisy { noise_var })
    }
}

/// Linear-in-information equilibrium coefficients: action =
/// `coeff_signal * w + coeff_prior * mu` per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCoefficients {
    pub coeff_signal: DVector<f64>,
    pub coeff_prior: DVector<f64>,
}

/// An equilibrium action profile, optionally with its linear coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumProfile {
    pub actions: DVector<f64>,
    pub coefficients: Option<EquilibriumCoefficients>,
}

/// Posterior over a scalar Gaussian state given a public noisy signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorMean {
    /// Weight on the signal, in [0, 1].
    pub xi: f64,
    pub mean: f64,
}

/// Equilibrium under full disclosure: `a = H^-1 g`.
pub fn solve_full_disclosure(spec: &GameSpec, gamma: &DVector<f64>) -> Result<EquilibriumProfile> {
    if gamma.len() != spec.n() {
        return Err(CoreError::InvalidSpec(format!(
            "state vector must have length {}",
            spec.n()
        )));
    }
    let actions = linalg::solve_checked(spec.h(), gamma)?;
    Ok(EquilibriumProfile {
        actions,
        coefficients: None,
    })
}

/// Equilibrium under no disclosure: `a = H^-1 mu`.
pub fn solve_no_disclosure(spec: &GameSpec, mu: &DVector<f64>) -> Result<EquilibriumProfile> {
    solve_full_disclosure(spec, mu)
}

/// Bayes update of a scalar state `g ~ psi(mu, var_gamma)` after observing
/// the public signal `w = g + noise`, `noise ~ psi(0, noise_var)`.
pub fn posterior_mean(mu: f64, omega_bar: f64, var_gamma: f64, noise_var: f64) -> Result<PosteriorMean> {
    if var_gamma < 0.0 || noise_var < 0.0 {
        return Err(CoreError::InvalidSpec(
            "variances must be nonnegative".into(),
        ));
    }
    let total = var_gamma + noise_var;
    if total <= 0.0 {
        return Err(CoreError::DegeneratePosterior);
    }
    let xi = var_gamma / total;
    Ok(PosteriorMean {
        xi,
        mean: (1.0 - xi) * mu + xi * omega_bar,
    })
}

/// Equilibrium under a public noisy signal with a common payoff state:
/// `a_i = E[g | w] * [H^-1 1]_i`, with linear coefficients
/// `xi * H^-1 1` on the signal and `(1 - xi) * H^-1 1` on the prior mean.
pub fn solve_public_signal(
    spec: &GameSpec,
    mu: f64,
    omega_bar: f64,
    var_gamma: f64,
    noise_var: f64,
) -> Result<EquilibriumProfile> {
    if !matches!(spec.prior(), StatePrior::CommonHierarchical { .. }) {
        return Err(CoreError::NonCommonPrior);
    }
    let post = posterior_mean(mu, omega_bar, var_gamma, noise_var)?;
    let ones = DVector::from_element(spec.n(), 1.0);
    let x = linalg::solve_checked(spec.h(), &ones)?;
    let actions = &x * post.mean;
    Ok(EquilibriumProfile {
        actions,
        coefficients: Some(EquilibriumCoefficients {
            coeff_signal: &x * post.xi,
            coeff_prior: &x * (1.0 - post.xi),
        }),
    })
}

/// Max-norm first-order-condition residual `||H a - E[g | info]||_inf`.
/// A profile is an equilibrium iff this is below tolerance.
pub fn bne_residual(spec: &GameSpec, profile: &EquilibriumProfile, expected_gamma: &DVector<f64>) -> f64 {
    let r = spec.h() * &profile.actions - expected_gamma;
    linalg::inf_norm(&r)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<EquilibriumProfile>();
    check::<DisclosurePolicy>();
}
