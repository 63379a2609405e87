//! Small dense linear-algebra helpers shared across modules.
//!
//! Matrices in this crate are at most 40x40, so everything here uses dense
//! factorizations from nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};

/// Condition-number ceiling above which a linear solve is rejected.
pub const COND_LIMIT: f64 = 1e12;

/// Frobenius inner product `A . B`.
pub fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// 2-norm condition number estimate via singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Solve `M x = rhs`, rejecting near-singular systems.
pub fn solve_checked(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let cond = condition_number(m);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(CoreError::NearSingular {
            cond,
            limit: COND_LIMIT,
        });
    }
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or(CoreError::NearSingular {
            cond: f64::INFINITY,
            limit: COND_LIMIT,
        })
}

/// Eigenvalues of the symmetrized matrix `(M + M^T)/2`, ascending.
pub fn symmetrized_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Project a matrix onto the positive semidefinite cone: symmetrize, then
/// clip negative eigenvalues to zero.
pub fn psd_project(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let clipped = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| l.max(0.0)),
    );
    let q = &eig.eigenvectors;
    let rebuilt = q * DMatrix::from_diagonal(&clipped) * q.transpose();
    (&rebuilt + rebuilt.transpose()) * 0.5
}

/// Smallest eigenvalue of the symmetrized matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetrized_eigenvalues(m)[0]
}

/// Max-abs norm of a vector.
pub fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
