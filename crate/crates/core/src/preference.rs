//! Per-agent ex-ante disclosure preferences.
//!
//! An agent prefers full disclosure when
//! `x_i (2 - H_ii x_i - 2 sum_{j != i} H_ij x_j) > 0` with `x = H^-1 1`;
//! under a common hierarchical prior the expected gain is that value times
//! `sigma^2`. The row identity `sum_j H_ij x_j = 1` collapses the bracket to
//! `H_ii x_i`, so the gain equals `sigma^2 H_ii x_i^2`.
//!
//! Star networks additionally get the printed closed forms and bounds
//! evaluated verbatim next to the direct numerics. The two disagree in
//! places; both paths are reported as data and never reconciled silently.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::game::{classify_coupling, GameSpec, StatePrior};
use crate::linalg;
use crate::report::{fmt_bool, fmt_g9};

/// Strict-inequality verdict with an indifference band at |value| < 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    PrefersFull,
    Indifferent,
    PrefersNo,
}

pub const INDIFFERENCE_BAND: f64 = 1e-12;

/// The disclosure-preference condition value for one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceCondition {
    pub value: f64,
    pub verdict: Preference,
}

impl PreferenceCondition {
    fn from_value(value: f64) -> Self {
        let verdict = if value.abs() < INDIFFERENCE_BAND {
            Preference::Indifferent
        } else if value > 0.0 {
            Preference::PrefersFull
        } else {
            Preference::PrefersNo
        };
        Self { value, verdict }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Preference::PrefersFull
    }
}

/// Solve `H x = 1`.
pub fn h_inverse_ones(spec: &GameSpec) -> Result<DVector<f64>> {
    let ones = DVector::from_element(spec.n(), 1.0);
    linalg::solve_checked(spec.h(), &ones)
}

fn condition_value(spec: &GameSpec, x: &DVector<f64>, i: usize) -> f64 {
    let h = spec.h();
    let cross: f64 = (0..spec.n())
        .filter(|&j| j != i)
        .map(|j| h[(i, j)] * x[j])
        .sum();
    x[i] * (2.0 - h[(i, i)] * x[i] - 2.0 * cross)
}

/// Expected utility gain of agent `i` from full over no disclosure under a
/// common hierarchical prior: `sigma^2 x_i (2 - H_ii x_i - 2 sum H_ij x_j)`.
pub fn exante_gain(spec: &GameSpec, i: usize) -> Result<f64> {
    let n = spec.n();
    if i >= n {
        return Err(CoreError::AgentIndexOutOfRange { index: i, n });
    }
    let sigma = match spec.prior() {
        StatePrior::CommonHierarchical { sigma, .. } => *sigma,
        StatePrior::GeneralGaussian { .. } => return Err(CoreError::NonCommonPrior),
    };
    let x = h_inverse_ones(spec)?;
    Ok(sigma * sigma * condition_value(spec, &x, i))
}

/// Evaluate the disclosure-preference condition for agent `i`.
pub fn preference_condition(spec: &GameSpec, i: usize) -> Result<PreferenceCondition> {
    let n = spec.n();
    if i >= n {
        return Err(CoreError::AgentIndexOutOfRange { index: i, n });
    }
    let x = h_inverse_ones(spec)?;
    Ok(PreferenceCondition::from_value(condition_value(spec, &x, i)))
}

/// Closed-form `H^-1 1` entries for the symmetric star.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarClosedForms {
    pub x_central: f64,
    pub x_peripheral: f64,
}

/// `x_c = ((n-1)b - 1)/((n-1)b^2 - 1)`, `x_p = (b - 1)/((n-1)b^2 - 1)`.
pub fn star_closed_forms(n: usize, beta: f64) -> Result<StarClosedForms> {
    if n < 3 {
        return Err(CoreError::InvalidSpec(format!(
            "star closed forms need n >= 3, got {n}"
        )));
    }
    let nf = (n - 1) as f64;
    let denom = nf * beta * beta - 1.0;
    if denom.abs() < 1e-12 {
        return Err(CoreError::SingularStarDenominator { n, beta });
    }
    Ok(StarClosedForms {
        x_central: (nf * beta - 1.0) / denom,
        x_peripheral: (beta - 1.0) / denom,
    })
}

/// Both the printed star inequalities and the direct condition values.
///
/// The printed central simplification does not follow from the direct
/// condition under the row identity (which gives `x_c^2`); both are returned
/// so disagreements stay visible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarPreferenceCheck {
    pub central_prefers_full: bool,
    pub peripheral_prefers_full: bool,
    /// `((n-1)b - 1)((n-1)b - 3)` as printed.
    pub paper_central_inequality: f64,
    /// `(b - 1)^2` as printed.
    pub paper_peripheral_inequality: f64,
    /// Direct condition value for the hub (equals `x_c^2` by the row identity).
    pub direct_condition_central: f64,
    /// Direct condition value for a spoke (equals `x_p^2`).
    pub direct_condition_peripheral: f64,
}

pub fn star_preference_check(n: usize, beta: f64) -> Result<StarPreferenceCheck> {
    let closed = star_closed_forms(n, beta)?;
    let nf = (n - 1) as f64;
    let xc = closed.x_central;
    let xp = closed.x_peripheral;
    // Direct evaluation: peripheral neighbors of the hub contribute
    // (n-1) beta x_p; a spoke's only neighbor is the hub.
    let direct_central = xc * (2.0 - xc - 2.0 * nf * beta * xp);
    let direct_peripheral = xp * (2.0 - xp - 2.0 * beta * xc);
    Ok(StarPreferenceCheck {
        central_prefers_full: direct_central > 0.0,
        peripheral_prefers_full: direct_peripheral > 0.0,
        paper_central_inequality: (nf * beta - 1.0) * (nf * beta - 3.0),
        paper_peripheral_inequality: (beta - 1.0) * (beta - 1.0),
        direct_condition_central: direct_central,
        direct_condition_peripheral: direct_peripheral,
    })
}

/// Printed interval bounds for where a spoke's gain exceeds the hub's.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpokeAdvantageBounds {
    pub lower: f64,
    pub upper: f64,
    pub nu: f64,
}

/// `nu = n^2 - 2n + 4`, bounds `(2(n-1) -+ sqrt(nu)) / (n(n-2))`.
pub fn spoke_advantage_bounds(n: usize) -> Result<SpokeAdvantageBounds> {
    if n < 3 {
        return Err(CoreError::InvalidSpec(format!(
            "interval bounds need n >= 3, got {n}"
        )));
    }
    let nf = n as f64;
    let nu = nf * nf - 2.0 * nf + 4.0;
    let root = nu.sqrt();
    let denom = nf * (nf - 2.0);
    Ok(SpokeAdvantageBounds {
        lower: (2.0 * (nf - 1.0) - root) / denom,
        upper: (2.0 * (nf - 1.0) + root) / denom,
        nu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainVerdict {
    CentralWins,
    PeripheralWins,
    Tie,
}

impl std::fmt::Display for GainVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::CentralWins => write!(f, "central"),
            Self::PeripheralWins => write!(f, "peripheral"),
            Self::Tie => write!(f, "tie"),
        }
    }
}

/// Hub-versus-spoke gain comparison via both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainComparison {
    pub central_gain: f64,
    pub peripheral_gain: f64,
    pub paper_interval_verdict: GainVerdict,
    pub direct_verdict: GainVerdict,
    pub agree: bool,
}

pub fn gain_comparison(n: usize, beta: f64, sigma: f64) -> Result<GainComparison> {
    let prior = StatePrior::common(0.0, 0.0, sigma)?;
    let spec = crate::game::build_star(n, beta, prior)?;
    let central_gain = exante_gain(&spec, 0)?;
    let peripheral_gain = exante_gain(&spec, 1)?;
    let diff = central_gain - peripheral_gain;
    let tol = 1e-14 * central_gain.abs().max(peripheral_gain.abs()).max(1.0);
    let direct_verdict = if diff.abs() <= tol {
        GainVerdict::Tie
    } else if diff > 0.0 {
        GainVerdict::CentralWins
    } else {
        GainVerdict::PeripheralWins
    };
    let bounds = spoke_advantage_bounds(n)?;
    let paper_interval_verdict = if beta > bounds.lower && beta < bounds.upper {
        GainVerdict::PeripheralWins
    } else {
        GainVerdict::CentralWins
    };
    Ok(GainComparison {
        central_gain,
        peripheral_gain,
        paper_interval_verdict,
        direct_verdict,
        agree: direct_verdict == paper_interval_verdict,
    })
}

/// One row of the bounds-versus-dominance table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    /// Diagonal-dominance line `1/(n-1)`.
    pub diag_dominance: f64,
}

pub fn fig2_data(n_min: usize, n_max: usize) -> Result<Vec<Fig2Row>> {
    if n_min < 3 {
        return Err(CoreError::InvalidSpec(format!(
            "table needs n >= 3, got n_min={n_min}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let b = spoke_advantage_bounds(n)?;
            Ok(Fig2Row {
                n,
                lower: b.lower,
                upper: b.upper,
                diag_dominance: 1.0 / (n as f64 - 1.0),
            })
        })
        .collect()
}

pub const FIG2_CSV_HEADER: &str = "n,lower,upper,diag_dominance";

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    let mut out = String::from(FIG2_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            fmt_g9(r.lower),
            fmt_g9(r.upper),
            fmt_g9(r.diag_dominance)
        ));
    }
    out
}

/// Star cross-checks attached to a preference report.
#[derive(Debug, Clone)]
pub struct StarCheck {
    pub beta: f64,
    pub closed: StarClosedForms,
    pub star_inequalities: StarPreferenceCheck,
    pub bounds: SpokeAdvantageBounds,
    pub comparison: GainComparison,
}

/// Per-agent preference analysis of one game instance.
#[derive(Debug, Clone)]
pub struct PreferenceReport {
    pub x: DVector<f64>,
    pub exante_gain: Vec<f64>,
    pub conditions: Vec<PreferenceCondition>,
    pub star_check: Option<StarCheck>,
}

/// Detect the symmetric star parameterization: unit diagonal and one shared
/// hub coupling.
pub fn symmetric_star_beta(spec: &GameSpec) -> Option<f64> {
    if !spec.topology().is_star() {
        return None;
    }
    let h = spec.h();
    let n = spec.n();
    if (0..n).any(|i| (h[(i, i)] - 1.0).abs() > 1e-12) {
        return None;
    }
    let beta = h[(0, 1)];
    for j in 1..n {
        if (h[(0, j)] - beta).abs() > 1e-12 || (h[(j, 0)] - beta).abs() > 1e-12 {
            return None;
        }
    }
    Some(beta)
}

/// Build the full per-agent report; requires a common hierarchical prior so
/// the ex-ante gain is defined.
pub fn preference_report(spec: &GameSpec) -> Result<PreferenceReport> {
    let sigma = match spec.prior() {
        StatePrior::CommonHierarchical { sigma, .. } => *sigma,
        StatePrior::GeneralGaussian { .. } => return Err(CoreError::NonCommonPrior),
    };
    let n = spec.n();
    let x = h_inverse_ones(spec)?;
    let mut gains = Vec::with_capacity(n);
    let mut conditions = Vec::with_capacity(n);
    for i in 0..n {
        let value = condition_value(spec, &x, i);
        gains.push(sigma * sigma * value);
        conditions.push(PreferenceCondition::from_value(value));
    }
    let star_check = match symmetric_star_beta(spec) {
        Some(beta) => Some(StarCheck {
            beta,
            closed: star_closed_forms(n, beta)?,
            star_inequalities: star_preference_check(n, beta)?,
            bounds: spoke_advantage_bounds(n)?,
            comparison: gain_comparison(n, beta, sigma)?,
        }),
        None => None,
    };
    Ok(PreferenceReport {
        x,
        exante_gain: gains,
        conditions,
        star_check,
    })
}

pub const PREFERENCE_CSV_HEADER: &str =
    "n,beta,agent,x_i,exante_gain,theorem2_value,theorem2_holds";

/// Per-agent CSV rows; `beta` is written as `nan` for non-star coefficient
/// matrices.
pub fn preference_csv(report: &PreferenceReport, n: usize, beta: Option<f64>) -> String {
    let beta_field = match beta {
        Some(b) => fmt_g9(b),
        None => "nan".to_string(),
    };
    let mut out = String::from(PREFERENCE_CSV_HEADER);
    out.push('\n');
    for i in 0..n {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            n,
            beta_field,
            i + 1,
            fmt_g9(report.x[i]),
            fmt_g9(report.exante_gain[i]),
            fmt_g9(report.conditions[i].value),
            fmt_bool(report.conditions[i].holds()),
        ));
    }
    out
}

pub const STAR_CHECK_CSV_HEADER: &str = "n,beta,x_central_closed,x_peripheral_closed,\
x_central_solve,x_peripheral_solve,paper_central_inequality,paper_peripheral_inequality,\
direct_condition_central,direct_condition_peripheral,central_gain,peripheral_gain,\
interval_lower,interval_upper,paper_verdict,direct_verdict,agreement,cross_partial_label,beta_sign_label";

/// The paper-convention shorthand that labels games by the sign of the
/// coupling coefficient itself (opposite of the cross-partial labeling).
pub fn beta_sign_label(beta: f64) -> &'static str {
    if beta > 0.0 {
        "supermodular"
    } else if beta < 0.0 {
        "submodular"
    } else {
        "decoupled"
    }
}

/// One-row star cross-check table.
pub fn star_check_csv(spec: &GameSpec, report: &PreferenceReport) -> Option<String> {
    let check = report.star_check.as_ref()?;
    let couplings = classify_coupling(spec);
    let cross_label = couplings
        .first()
        .map(|e| e.label.to_string())
        .unwrap_or_else(|| "decoupled".to_string());
    let mut out = String::from(STAR_CHECK_CSV_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        spec.n(),
        fmt_g9(check.beta),
        fmt_g9(check.closed.x_central),
        fmt_g9(check.closed.x_peripheral),
        fmt_g9(report.x[0]),
        fmt_g9(report.x[1]),
        fmt_g9(check.star_inequalities.paper_central_inequality),
        fmt_g9(check.star_inequalities.paper_peripheral_inequality),
        fmt_g9(check.star_inequalities.direct_condition_central),
        fmt_g9(check.star_inequalities.direct_condition_peripheral),
        fmt_g9(check.comparison.central_gain),
        fmt_g9(check.comparison.peripheral_gain),
        fmt_g9(check.bounds.lower),
        fmt_g9(check.bounds.upper),
        check.comparison.paper_interval_verdict,
        check.comparison.direct_verdict,
        fmt_bool(check.comparison.agree),
        cross_label,
        beta_sign_label(check.beta),
    ));
    Some(out)
}

/// Evenly spaced open-interval grid over the dominance range
/// `(-1/(n-1), 1/(n-1))`, excluding a 1e-3 neighborhood of the closed-form
/// denominator zeros at `|b| = 1/sqrt(n-1)`.
pub fn admissible_beta_grid(n: usize, points: usize) -> Vec<f64> {
    let bound = 1.0 / (n as f64 - 1.0);
    let singular = 1.0 / (n as f64 - 1.0).sqrt();
    (0..points)
        .map(|k| -bound + (k as f64 + 0.5) * (2.0 * bound / points as f64))
        .filter(|b| (b.abs() - singular).abs() > 1e-3)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_star;
    use nalgebra::DMatrix;

    fn star(n: usize, beta: f64, sigma: f64) -> GameSpec {
        build_star(n, beta, StatePrior::common(1.0, 0.3, sigma).unwrap()).unwrap()
    }

    #[test]
    fn h_inverse_ones_identity() {
        let topology = crate::game::NetworkTopology::complete(3).unwrap();
        let payoff =
            crate::game::PayoffMatrix::new(DMatrix::identity(3, 3), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, StatePrior::common(0.0, 0.0, 1.0).unwrap())
            .unwrap();
        let x = h_inverse_ones(&spec).unwrap();
        assert!((x - DVector::from_element(3, 1.0)).abs().max() < 1e-14);
    }

    #[test]
    fn h_inverse_ones_star_values() {
        let x = h_inverse_ones(&star(4, 0.2, 0.1)).unwrap();
        assert!((x[0] - 5.0 / 11.0).abs() < 1e-12);
        assert!((x[1] - 10.0 / 11.0).abs() < 1e-12);

        let x = h_inverse_ones(&star(4, -0.3, 0.1)).unwrap();
        assert!((x[0] - 190.0 / 73.0).abs() < 1e-12);
        assert!((x[3] - 130.0 / 73.0).abs() < 1e-12);
    }

    #[test]
    fn exante_gain_decoupled_case() {
        let topology = crate::game::NetworkTopology::complete(2).unwrap();
        let payoff =
            crate::game::PayoffMatrix::new(DMatrix::identity(2, 2), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, StatePrior::common(1.0, 0.3, 0.1).unwrap())
            .unwrap();
        for i in 0..2 {
            assert!((exante_gain(&spec, i).unwrap() - 0.01).abs() < 1e-15);
        }
    }

    #[test]
    fn exante_gain_star_examples() {
        let spec = star(4, 0.2, 0.1);
        assert!((exante_gain(&spec, 0).unwrap() - 0.01 * 25.0 / 121.0).abs() < 1e-12);
        assert!((exante_gain(&spec, 1).unwrap() - 0.01 * 100.0 / 121.0).abs() < 1e-12);

        let spec = star(4, -0.3, 0.1);
        assert!((exante_gain(&spec, 0).unwrap() - 0.01 * 36100.0 / 5329.0).abs() < 1e-10);
        assert!((exante_gain(&spec, 1).unwrap() - 0.01 * 16900.0 / 5329.0).abs() < 1e-10);
    }

    #[test]
    fn exante_gain_requires_common_prior() {
        let topology = crate::game::NetworkTopology::complete(2).unwrap();
        let payoff =
            crate::game::PayoffMatrix::new(DMatrix::identity(2, 2), &topology).unwrap();
        let prior =
            StatePrior::general(DVector::zeros(2), DMatrix::identity(2, 2)).unwrap();
        let spec = GameSpec::new(topology, payoff, prior).unwrap();
        assert!(matches!(
            exante_gain(&spec, 0),
            Err(CoreError::NonCommonPrior)
        ));
    }

    #[test]
    fn preference_condition_identity_and_boundary() {
        let topology = crate::game::NetworkTopology::complete(2).unwrap();
        let payoff =
            crate::game::PayoffMatrix::new(DMatrix::identity(2, 2), &topology).unwrap();
        let spec = GameSpec::new(topology, payoff, StatePrior::common(1.0, 0.3, 0.1).unwrap())
            .unwrap();
        let c = preference_condition(&spec, 0).unwrap();
        assert!((c.value - 1.0).abs() < 1e-14);
        assert!(c.holds());

        // x_central = 0 at beta = 1/(n-1): boundary, indifferent.
        let spec = star(4, 1.0 / 3.0, 0.1);
        let c = preference_condition(&spec, 0).unwrap();
        assert!(c.value.abs() < 1e-12);
        assert_eq!(c.verdict, Preference::Indifferent);
    }

    #[test]
    fn condition_equals_hii_x_squared_on_random_pd_matrices() {
        // Row identity: value = H_ii x_i^2 for any invertible H with Hx = 1.
        let mut state = 0xfeed_beef_u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for trial in 0..100 {
            let n = 2 + (trial % 7);
            let b = DMatrix::from_fn(n, n, |_, _| next() * 2.0 - 1.0);
            let h = &b * b.transpose() + DMatrix::identity(n, n) * 0.5;
            let topology = crate::game::NetworkTopology::complete(n).unwrap();
            let payoff = crate::game::PayoffMatrix::new(h.clone(), &topology).unwrap();
            let spec =
                GameSpec::new(topology, payoff, StatePrior::common(0.0, 0.0, 1.0).unwrap())
                    .unwrap();
            let x = h_inverse_ones(&spec).unwrap();
            for i in 0..n {
                let c = preference_condition(&spec, i).unwrap();
                assert!(
                    (c.value - h[(i, i)] * x[i] * x[i]).abs() < 1e-10,
                    "n={n} i={i}"
                );
            }
        }
    }

    #[test]
    fn star_closed_forms_match_dense_solve() {
        for &(n, beta) in &[(4usize, 0.2), (4, 0.0), (10, -0.1), (7, 0.12)] {
            let forms = star_closed_forms(n, beta).unwrap();
            let x = h_inverse_ones(&star(n, beta, 0.1)).unwrap();
            assert!((forms.x_central - x[0]).abs() < 1e-10, "n={n} beta={beta}");
            assert!(
                (forms.x_peripheral - x[1]).abs() < 1e-10,
                "n={n} beta={beta}"
            );
        }
        // Spot values.
        let f = star_closed_forms(10, -0.1).unwrap();
        assert!((f.x_central - (-1.9) / (-0.91)).abs() < 1e-12);
        assert!((f.x_peripheral - (-1.1) / (-0.91)).abs() < 1e-12);
    }

    #[test]
    fn star_closed_forms_reject_singular_denominator() {
        assert!(matches!(
            star_closed_forms(4, 1.0 / 3.0_f64.sqrt()),
            Err(CoreError::SingularStarDenominator { .. })
        ));
    }

    #[test]
    fn star_inequality_values_at_reference_points() {
        // (4, 0.2): direct central = x_c^2 = (5/11)^2; printed central
        // inequality (0.6-1)(0.6-3) = 0.96. Both positive, so the
        // conclusions coincide even though the values differ.
        let p = star_preference_check(4, 0.2).unwrap();
        assert!((p.direct_condition_central - 25.0 / 121.0).abs() < 1e-12);
        assert!((p.paper_central_inequality - 0.96).abs() < 1e-12);
        assert!(p.central_prefers_full);
        assert!(p.peripheral_prefers_full);

        let p = star_preference_check(4, -0.3).unwrap();
        assert!((p.paper_peripheral_inequality - 1.69).abs() < 1e-12);
        assert!(p.direct_condition_peripheral > 0.0);

        let p = star_preference_check(4, 0.0).unwrap();
        assert!(p.paper_central_inequality > 0.0);
        assert!(p.paper_peripheral_inequality > 0.0);
        assert!(p.direct_condition_central > 0.0);
        assert!(p.direct_condition_peripheral > 0.0);
    }

    #[test]
    fn spoke_advantage_bounds_values() {
        let b = spoke_advantage_bounds(4).unwrap();
        assert_eq!(b.nu, 12.0);
        assert!((b.lower - (6.0 - 12.0_f64.sqrt()) / 8.0).abs() < 1e-15);
        assert!((b.upper - (6.0 + 12.0_f64.sqrt()) / 8.0).abs() < 1e-15);
        assert!((b.lower - 0.316987298).abs() < 1e-9);
        assert!((b.upper - 1.183012702).abs() < 1e-9);

        let b = spoke_advantage_bounds(10).unwrap();
        assert_eq!(b.nu, 84.0);
        assert!((b.lower - 0.110435608).abs() < 1e-9);
        assert!((b.upper - 0.339564392).abs() < 1e-9);

        let b = spoke_advantage_bounds(3).unwrap();
        assert_eq!(b.nu, 7.0);
        assert!((b.lower - 0.451416229).abs() < 1e-9);
        assert!((b.upper - 2.215250437).abs() < 1e-9);

        assert!(spoke_advantage_bounds(2).is_err());
    }

    #[test]
    fn gain_comparison_documented_disagreement() {
        // beta = 0.2 sits outside the printed interval (paper: central wins)
        // while the direct gains favor the spoke; the mismatch is data.
        let g = gain_comparison(4, 0.2, 0.1).unwrap();
        assert!((g.central_gain - 0.002066116).abs() < 1e-8);
        assert!((g.peripheral_gain - 0.008264463).abs() < 1e-8);
        assert_eq!(g.direct_verdict, GainVerdict::PeripheralWins);
        assert_eq!(g.paper_interval_verdict, GainVerdict::CentralWins);
        assert!(!g.agree);

        let g = gain_comparison(4, -0.3, 0.1).unwrap();
        assert_eq!(g.direct_verdict, GainVerdict::CentralWins);
        assert_eq!(g.paper_interval_verdict, GainVerdict::CentralWins);
        assert!(g.agree);

        let g = gain_comparison(4, 0.0, 0.1).unwrap();
        assert_eq!(g.direct_verdict, GainVerdict::Tie);
        assert!((g.central_gain - g.peripheral_gain).abs() < 1e-15);
    }

    #[test]
    fn star_gain_difference_identity() {
        // central - peripheral = sigma^2 (n-2) b (n b - 2) / D^2.
        for &n in &[3usize, 4, 10] {
            for b in admissible_beta_grid(n, 50) {
                let g = gain_comparison(n, b, 0.1).unwrap();
                let nf = n as f64;
                let d = (nf - 1.0) * b * b - 1.0;
                let expected = 0.01 * (nf - 2.0) * b * (nf * b - 2.0) / (d * d);
                assert!(
                    ((g.central_gain - g.peripheral_gain) - expected).abs() < 1e-10,
                    "n={n} beta={b}"
                );
            }
        }
    }

    #[test]
    fn fig2_rows() {
        let rows = fig2_data(3, 20).unwrap();
        assert_eq!(rows.len(), 18);
        let r10 = rows.iter().find(|r| r.n == 10).unwrap();
        assert!((r10.lower - 0.110435608).abs() < 1e-9);
        assert!((r10.upper - 0.339564392).abs() < 1e-9);
        assert!((r10.diag_dominance - 1.0 / 9.0).abs() < 1e-15);
        let r4 = rows.iter().find(|r| r.n == 4).unwrap();
        assert!((r4.diag_dominance - 1.0 / 3.0).abs() < 1e-15);
        assert!(fig2_data(2, 20).is_err());
    }

    #[test]
    fn fig2_csv_header_and_shape() {
        let rows = fig2_data(3, 5).unwrap();
        let csv = fig2_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,lower,upper,diag_dominance");
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn preference_report_star() {
        let spec = star(4, 0.2, 0.1);
        let report = preference_report(&spec).unwrap();
        // Hx = 1 residual.
        let res = spec.h() * &report.x - DVector::from_element(4, 1.0);
        assert!(res.abs().max() < 1e-10);
        assert!(report.conditions.iter().all(|c| c.holds()));
        let check = report.star_check.as_ref().unwrap();
        assert_eq!(check.beta, 0.2);
        assert!((check.closed.x_central - report.x[0]).abs() < 1e-10);
        let csv = preference_csv(&report, 4, Some(0.2));
        assert!(csv.starts_with(PREFERENCE_CSV_HEADER));
        assert_eq!(csv.lines().count(), 5);
        let star_csv = star_check_csv(&spec, &report).unwrap();
        assert!(star_csv.starts_with(STAR_CHECK_CSV_HEADER));
        assert!(star_csv.contains("substitutes"));
        assert!(star_csv.contains("supermodular"));
    }

    #[test]
    fn beta_grid_stays_in_open_interval() {
        for &n in &[3usize, 4, 10, 20] {
            let grid = admissible_beta_grid(n, 400);
            let bound = 1.0 / (n as f64 - 1.0);
            assert!(!grid.is_empty());
            assert!(grid.iter().all(|b| b.abs() < bound));
        }
    }
}
