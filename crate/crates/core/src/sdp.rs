//! Welfare-maximization SDP over equilibrium covariance matrices.
//!
//! The designer's problem is `max F . X` over symmetric PSD `X` (the joint
//! covariance of actions and states) subject to linear equality constraints:
//! `M_kl . X` pins the state covariance block and `R_k . X = 0` encodes the
//! equilibrium first-order conditions.
//!
//! The solver is a splitting scheme: each sweep projects onto the affine
//! constraint subspace (with an objective-ascent term folded in) and onto the
//! PSD cone via symmetric eigendecomposition with negative eigenvalues
//! clipped to zero. It is deterministic given inputs and tolerances.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::game::{GameSpec, StatePrior};
use crate::linalg;
use crate::report::{fmt_bool, fmt_g9};

/// Which objective matrix to assemble.
///
/// `PaperLiteral` places `-H` in the action block. `WelfareExact` uses the
/// symmetrized quadratic form whose Frobenius product with the covariance
/// equals expected aggregate welfare for zero-mean variables (off-diagonal
/// couplings are counted once per ordered pair, so they double relative to
/// `H` when `H` is symmetric).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FMode {
    PaperLiteral,
    WelfareExact,
}

/// One equality constraint `A . X = b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpConstraint {
    pub name: String,
    /// Dense symmetric matrix, row-major.
    pub a: Vec<Vec<f64>>,
    pub b: f64,
}

impl SdpConstraint {
    fn matrix(&self) -> DMatrix<f64> {
        let dim = self.a.len();
        DMatrix::from_fn(dim, dim, |i, j| self.a[i][j])
    }

    fn from_matrix(name: String, m: &DMatrix<f64>, b: f64) -> Self {
        let a = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect();
        Self { name, a, b }
    }
}

/// The assembled problem: objective matrix plus equality constraints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdpProblem {
    pub n: usize,
    /// Objective matrix, row-major, `2n x 2n`.
    pub f: Vec<Vec<f64>>,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn f_matrix(&self) -> DMatrix<f64> {
        let dim = self.f.len();
        DMatrix::from_fn(dim, dim, |i, j| self.f[i][j])
    }

    /// Largest absolute equality-constraint violation of `x`.
    pub fn max_equality_residual(&self, x: &DMatrix<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|c| (linalg::frobenius(&c.matrix(), x) - c.b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("SDP problem serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| CoreError::Config(format!("bad SDP instance: {e}")))
    }
}

/// Solver outcome with residual diagnostics.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: DMatrix<f64>,
    pub objective: f64,
    pub max_equality_residual: f64,
    pub min_eigenvalue: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub psd_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-7,
            psd_tol: 1e-8,
            max_iter: 50_000,
        }
    }
}

/// Objective matrix `[[ -W, I ], [ I, 0 ]]`.
///
/// The lower-right block is zero: the state covariance does not depend on
/// the disclosure choice, so it carries no objective weight.
pub fn build_f(spec: &GameSpec, mode: FMode) -> DMatrix<f64> {
    let n = spec.n();
    let h = spec.h();
    let mut f = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let w = if i == j {
                h[(i, i)]
            } else {
                match mode {
                    FMode::PaperLiteral => h[(i, j)],
                    FMode::WelfareExact => h[(i, j)] + h[(j, i)],
                }
            };
            f[(i, j)] = -w;
        }
        f[(i, n + i)] = 1.0;
        f[(n + i, i)] = 1.0;
    }
    f
}

/// State-covariance selector `M_kl` (1-based `k <= l`): a unit weight on the
/// `(n+k, n+l)` cell, split across the two symmetric positions when `k < l`.
pub fn build_m(k: usize, l: usize, n: usize) -> Result<DMatrix<f64>> {
    if k < 1 || l < k || l > n {
        return Err(CoreError::BadConstraintIndex { k, l, n });
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    let (i, j) = (n + k - 1, n + l - 1);
    if k == l {
        m[(i, j)] = 1.0;
    } else {
        m[(i, j)] = 0.5;
        m[(j, i)] = 0.5;
    }
    Ok(m)
}

/// Equilibrium-condition matrix `R_k` (1-based): for symmetric `X`,
/// `R_k . X = sum_j H_kj cov(a_k, a_j) - cov(a_k, g_k)`.
pub fn build_r(k: usize, spec: &GameSpec) -> Result<DMatrix<f64>> {
    let n = spec.n();
    if k < 1 || k > n {
        return Err(CoreError::BadConstraintIndex { k, l: k, n });
    }
    let h = spec.h();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    let k0 = k - 1;
    r[(k0, k0)] = h[(k0, k0)];
    for j in 0..n {
        if j != k0 {
            r[(k0, j)] = h[(k0, j)] / 2.0;
            r[(j, k0)] = h[(k0, j)] / 2.0;
        }
    }
    r[(k0, n + k0)] = -0.5;
    r[(n + k0, k0)] = -0.5;
    Ok(r)
}

/// Assemble the full problem for a game: `n(n+1)/2` state-covariance
/// constraints (right-hand sides from the prior) plus `n` equilibrium
/// constraints with zero right-hand sides.
pub fn assemble_problem(spec: &GameSpec, mode: FMode) -> Result<SdpProblem> {
    let n = spec.n();
    let cov = spec.prior().state_covariance(n)?;
    let mut constraints = Vec::with_capacity(n * (n + 1) / 2 + n);
    for k in 1..=n {
        for l in k..=n {
            let m = build_m(k, l, n)?;
            constraints.push(SdpConstraint::from_matrix(
                format!("M_{k}_{l}"),
                &m,
                cov[(k - 1, l - 1)],
            ));
        }
    }
    for k in 1..=n {
        let r = build_r(k, spec)?;
        constraints.push(SdpConstraint::from_matrix(format!("R_{k}"), &r, 0.0));
    }
    let f = build_f(spec, mode);
    Ok(SdpProblem {
        n,
        f: (0..f.nrows())
            .map(|i| (0..f.ncols()).map(|j| f[(i, j)]).collect())
            .collect(),
        constraints,
    })
}

/// Covariance of `(a, g)` under full disclosure `a = H^-1 g`; feasible for
/// every assembled problem.
pub fn x_full(spec: &GameSpec) -> Result<DMatrix<f64>> {
    let n = spec.n();
    let h = spec.h();
    let cond = linalg::condition_number(h);
    if !cond.is_finite() || cond > linalg::COND_LIMIT {
        return Err(CoreError::NearSingular {
            cond,
            limit: linalg::COND_LIMIT,
        });
    }
    let hinv = h.clone().lu().try_inverse().ok_or(CoreError::NearSingular {
        cond: f64::INFINITY,
        limit: linalg::COND_LIMIT,
    })?;
    let cov = spec.prior().state_covariance(n)?;
    let top_right = &hinv * &cov;
    let top_left = &top_right * hinv.transpose();
    let mut x = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = (top_left[(i, j)] + top_left[(j, i)]) / 2.0;
            x[(i, n + j)] = top_right[(i, j)];
            x[(n + j, i)] = top_right[(i, j)];
            x[(n + i, n + j)] = cov[(i, j)];
        }
    }
    Ok(x)
}

/// Covariance under no disclosure: deterministic actions, `F . X = 0`.
pub fn x_no(spec: &GameSpec) -> Result<DMatrix<f64>> {
    let n = spec.n();
    let cov = spec.prior().state_covariance(n)?;
    let mut x = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            x[(n + i, n + j)] = cov[(i, j)];
        }
    }
    Ok(x)
}

/// Equality-projection operator over normalized constraints.
struct AffineProjector {
    mats: Vec<DMatrix<f64>>,
    rhs: Vec<f64>,
    /// Frobenius norms of the original constraint matrices (0 entries dropped).
    scales: Vec<f64>,
    solver: GramSolver,
}

enum GramSolver {
    Cholesky(Cholesky<f64, Dyn>),
    PseudoInverse(DMatrix<f64>),
}

impl AffineProjector {
    fn new(constraints: &[SdpConstraint]) -> Result<Self> {
        let mut mats = Vec::new();
        let mut rhs = Vec::new();
        let mut scales = Vec::new();
        for c in constraints {
            let m = c.matrix();
            let norm = m.norm();
            if norm == 0.0 {
                if c.b.abs() > 0.0 {
                    return Err(CoreError::InvalidSpec(format!(
                        "constraint {} has a zero matrix but nonzero rhs {}",
                        c.name, c.b
                    )));
                }
                continue;
            }
            let mn = &m / norm;
            let bn = c.b / norm;
            // Merge exact duplicates; contradictory duplicates are kept and
            // surface later as an infeasibility plateau.
            let dup = mats
                .iter()
                .zip(rhs.iter())
                .any(|(em, eb): (&DMatrix<f64>, &f64)| {
                    (em - &mn).abs().max() < 1e-12 && (eb - bn).abs() < 1e-12
                });
            if dup {
                continue;
            }
            mats.push(mn);
            rhs.push(bn);
            scales.push(norm);
        }
        let m = mats.len();
        let mut gram = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let g = linalg::frobenius(&mats[i], &mats[j]);
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let solver = match Cholesky::new(gram.clone()) {
            Some(ch) => GramSolver::Cholesky(ch),
            None => {
                // Linearly dependent constraints: fall back to a spectral
                // pseudo-inverse so projection becomes least-squares.
                let eig = nalgebra::SymmetricEigen::new(gram);
                let lmax = eig.eigenvalues.max().max(0.0);
                let cut = 1e-12 * lmax.max(1.0);
                let inv = DVector::from_iterator(
                    eig.eigenvalues.len(),
                    eig.eigenvalues
                        .iter()
                        .map(|&l| if l > cut { 1.0 / l } else { 0.0 }),
                );
                let q = &eig.eigenvectors;
                GramSolver::PseudoInverse(q * DMatrix::from_diagonal(&inv) * q.transpose())
            }
        };
        Ok(Self {
            mats,
            rhs,
            scales,
            solver,
        })
    }

    fn project(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.mats.len();
        if m == 0 {
            return y.clone();
        }
        let resid = DVector::from_iterator(
            m,
            self.mats
                .iter()
                .zip(self.rhs.iter())
                .map(|(a, b)| linalg::frobenius(a, y) - b),
        );
        let lambda = match &self.solver {
            GramSolver::Cholesky(ch) => ch.solve(&resid),
            GramSolver::PseudoInverse(pinv) => pinv * &resid,
        };
        let mut out = y.clone();
        for (a, l) in self.mats.iter().zip(lambda.iter()) {
            out -= a * *l;
        }
        out
    }

    /// Residual in the original (unnormalized) constraint units.
    fn max_residual_original(&self, x: &DMatrix<f64>) -> f64 {
        self.mats
            .iter()
            .zip(self.rhs.iter())
            .zip(self.scales.iter())
            .map(|((a, b), s)| (linalg::frobenius(a, x) - b).abs() * s)
            .fold(0.0, f64::max)
    }
}

/// Maximize `F . X` over the constrained PSD set.
///
/// Consensus splitting with a scaled dual: the affine step absorbs the
/// ascent term `F / rho`, the cone step is an eigenvalue clip, and the
/// penalty adapts to balance the primal and dual residuals. The best
/// iterate is then polished with objective-free alternating projections
/// so equalities hold to machine precision. `converged = false` when the
/// optimality tolerances were not met within the iteration budget
/// (including infeasible inputs, which show up as an equality-residual
/// plateau).
pub fn solve_sdp(problem: &SdpProblem, opts: SolverOptions) -> Result<SdpSolution> {
    let dim = problem.dim();
    let f = problem.f_matrix();
    if f.nrows() != dim || f.ncols() != dim {
        return Err(CoreError::InvalidSpec(format!(
            "objective matrix is {}x{}, expected {dim}x{dim}",
            f.nrows(),
            f.ncols()
        )));
    }
    let proj = AffineProjector::new(&problem.constraints)?;

    let mut rho = 1.0_f64;
    let over_relax = 1.6;
    let mut z = linalg::psd_project(&proj.project(&DMatrix::zeros(dim, dim)));
    let mut u = DMatrix::zeros(dim, dim);

    let mut best = z.clone();
    let mut best_eq = proj.max_residual_original(&z);
    let mut best_obj = linalg::frobenius(&f, &z);
    let mut iterations = 0;
    let mut admm_converged = false;

    // Plateau detection for infeasible constraint sets.
    let mut stall_anchor = best_eq;
    let mut stall_iter = 0usize;

    let eps_abs = 1e-12 * dim as f64;
    let eps_rel = 1e-9;

    for iter in 1..=opts.max_iter {
        iterations = iter;
        let x = proj.project(&(&z - &u + &f / rho));
        let x_relaxed = &x * over_relax + &z * (1.0 - over_relax);
        let z_new = linalg::psd_project(&(&x_relaxed + &u));
        u += &x_relaxed - &z_new;

        let primal = (&x - &z_new).norm();
        let dual = rho * (&z_new - &z).norm();
        z = z_new;

        let eq_res = proj.max_residual_original(&z);
        let obj = linalg::frobenius(&f, &z);
        let better = if eq_res <= opts.feas_tol && best_eq <= opts.feas_tol {
            obj > best_obj
        } else {
            eq_res < best_eq
        };
        if better {
            best = z.clone();
            best_eq = eq_res;
            best_obj = obj;
        }

        let eps_pri = eps_abs + eps_rel * x.norm().max(z.norm());
        let eps_dual = eps_abs + eps_rel * (rho * u.norm());
        if primal <= eps_pri && dual <= eps_dual && eq_res <= opts.feas_tol {
            best = z.clone();
            best_eq = eq_res;
            admm_converged = true;
            break;
        }

        // Penalty balancing; the scaled dual is rescaled with it.
        if iter % 25 == 0 {
            if primal > 5.0 * dual {
                rho *= 2.0;
                u /= 2.0;
            } else if dual > 5.0 * primal {
                rho /= 2.0;
                u *= 2.0;
            }
        }

        // Infeasibility: the equality residual stops improving while still
        // far above tolerance.
        if iter - stall_iter >= 3000 {
            if best_eq > 10.0 * opts.feas_tol && best_eq > 0.995 * stall_anchor {
                break;
            }
            stall_anchor = best_eq;
            stall_iter = iter;
        }
    }

    // Feasibility polish: project the best iterate toward the intersection
    // of the affine set and the cone, then report the affine-projected point
    // so the equalities hold to machine precision.
    let polished = dykstra_polish(&proj, &best, opts.psd_tol);
    let pol_eq = proj.max_residual_original(&polished);
    let pol_mineig = linalg::min_eigenvalue(&polished);
    let (x_out, eq_out, mineig_out) = if pol_eq <= best_eq.max(opts.feas_tol) {
        (polished, pol_eq, pol_mineig)
    } else {
        let me = linalg::min_eigenvalue(&best);
        (best, best_eq, me)
    };
    let objective = linalg::frobenius(&f, &x_out);
    let feasible = eq_out <= opts.feas_tol && mineig_out >= -opts.psd_tol;
    Ok(SdpSolution {
        objective,
        max_equality_residual: eq_out,
        min_eigenvalue: mineig_out,
        iterations,
        converged: admm_converged && feasible,
        x: x_out,
    })
}

/// Alternating projections with correction terms onto the intersection of
/// the affine subspace and the PSD cone, reporting the affine-side iterate.
/// Stops once that iterate is PSD within half the cone tolerance.
fn dykstra_polish(proj: &AffineProjector, start: &DMatrix<f64>, psd_tol: f64) -> DMatrix<f64> {
    let dim = start.nrows();
    let mut y = start.clone();
    let mut correction = DMatrix::zeros(dim, dim);
    let mut affine = proj.project(&y);
    for _ in 0..5000 {
        affine = proj.project(&(&y + &correction));
        if linalg::min_eigenvalue(&affine) >= -0.5 * psd_tol {
            break;
        }
        correction = &y + &correction - &affine;
        y = linalg::psd_project(&affine);
    }
    affine
}

/// Which optimality hypotheses the instance satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalityConditions {
    pub symmetric_h: bool,
    pub common_state: bool,
    pub positive_definite: bool,
}

/// Full-disclosure optimality check: solver objective against the
/// full-disclosure covariance point.
#[derive(Debug, Clone)]
pub struct OptimalityReport {
    pub solution: SdpSolution,
    pub full_objective: f64,
    pub gap: f64,
    pub conditions: OptimalityConditions,
}

/// Solve the design SDP and compare against the full-disclosure point.
pub fn verify_full_disclosure_optimality(spec: &GameSpec, mode: FMode, opts: SolverOptions) -> Result<OptimalityReport> {
    let problem = assemble_problem(spec, mode)?;
    let solution = solve_sdp(&problem, opts)?;
    let xf = x_full(spec)?;
    let full_objective = linalg::frobenius(&problem.f_matrix(), &xf);
    let h = spec.h();
    let symmetric_h = (h - h.transpose()).abs().max() < 1e-12;
    let common_state = match spec.prior() {
        StatePrior::CommonHierarchical { .. } => true,
        StatePrior::GeneralGaussian { mu, sigma } => {
            let mu_equal = mu.iter().all(|&m| (m - mu[0]).abs() < 1e-12);
            let s0 = sigma[(0, 0)];
            let sigma_equal = sigma.iter().all(|&s| (s - s0).abs() < 1e-12);
            mu_equal && sigma_equal
        }
    };
    let positive_definite = linalg::min_eigenvalue(h) > 0.0;
    Ok(OptimalityReport {
        gap: solution.objective - full_objective,
        solution,
        full_objective,
        conditions: OptimalityConditions {
            symmetric_h,
            common_state,
            positive_definite,
        },
    })
}

/// CSV header for solution diagnostics.
pub const SOLUTION_CSV_HEADER: &str =
    "objective,full_objective,gap,max_equality_residual,min_eigenvalue,iterations,converged";

/// One-row CSV of solver diagnostics and the full-disclosure comparison.
pub fn solution_csv(report: &OptimalityReport) -> String {
    let s = &report.solution;
    format!(
        "{}\n{},{},{},{},{},{},{}\n",
        SOLUTION_CSV_HEADER,
        fmt_g9(s.objective),
        fmt_g9(report.full_objective),
        fmt_g9(report.gap),
        fmt_g9(s.max_equality_residual),
        fmt_g9(s.min_eigenvalue),
        s.iterations,
        fmt_bool(s.converged),
    )
}
