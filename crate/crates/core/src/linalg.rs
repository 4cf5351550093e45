//! Dense solvers used by the fitting routines.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};

/// Solves `a x = b` for Hermitian positive-definite `a` by Cholesky.
pub fn solve_hpd<T: ComplexField>(a: DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    let chol = a.cholesky().ok_or(Error::NotPositiveDefinite)?;
    Ok(chol.solve(b))
}

/// Least squares `min ||a x - b||` via Householder QR.
///
/// Fails with [`Error::RankDeficient`] when a diagonal entry of `R` is below
/// `max(m, n) * eps * max |R_ii|`.
pub fn least_squares_qr(a: DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::RankDeficient);
    }
    let qr = a.qr();
    let r = qr.r();
    let max_diag = r.diagonal().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = m.max(n) as f64 * f64::EPSILON * max_diag;
    if max_diag == 0.0 || r.diagonal().iter().any(|v| v.abs() <= tol) {
        return Err(Error::RankDeficient);
    }
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let rhs = qtb.rows(0, n).into_owned();
    r.solve_upper_triangular(&rhs).ok_or(Error::RankDeficient)
}

/// Adds `value` to every diagonal entry.
pub fn add_diagonal<T: ComplexField + Copy>(a: &mut DMatrix<T>, value: T) {
    for i in 0..a.nrows().min(a.ncols()) {
        a[(i, i)] += value;
    }
}
