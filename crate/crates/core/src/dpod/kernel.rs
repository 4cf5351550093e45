//! Polynomial-kernel ridge regression, `kappa(u, v) = sum_{k in D} (u^T v)^k`.
//!
//! The minimizer of `sum (f(y_i) - x_i)^2 + lambda ||f||^2` over the induced
//! RKHS is `f = sum_i beta_i kappa(y_i, .)` with `(K + lambda I) beta = x`.
//! [`kernel_fit_via_projection`] reaches the same coefficients through the
//! normal equations of the projection onto the constraint subspace of the
//! product space `H_K x R^K`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::compensate::RealPredictor;
use super::memory::{DegreeSet, MemorySpec};
use super::training::TrainingSet;
use super::Regularization;
use crate::error::{Error, Result};
use crate::linalg::{add_diagonal, solve_hpd};

/// `sum_{k in D} t^k` evaluated as `t (1 + t^2 (1 + t^2 (...)))`, which is
/// exactly odd in `t`.
#[inline]
pub fn odd_power_sum(t: f64, degrees: DegreeSet) -> f64 {
    let t2 = t * t;
    let mut acc = 1.0;
    for _ in 1..degrees.len() {
        acc = 1.0 + t2 * acc;
    }
    t * acc
}

#[inline]
fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Polynomial kernel over the odd degrees in `degrees`.
pub fn kernel_eval(u: &[f64], v: &[f64], degrees: DegreeSet) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    Ok(odd_power_sum(dot(u, v), degrees))
}

/// Gram matrix `K_ij = kappa(y_i, y_j)` over the training inputs.
pub fn gram_matrix(ts: &TrainingSet, degrees: DegreeSet) -> Result<DMatrix<f64>> {
    let n = ts.rows();
    let mut k = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let yj = ts.input(j);
        for i in j..n {
            let v = odd_power_sum(dot(ts.input(i), yj), degrees);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Gram matrix"));
    }
    Ok(k)
}

/// Kernel expansion `f(y) = sum_i beta_i kappa(s_i, y)` over support windows.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    memory: MemorySpec,
    degrees: DegreeSet,
    lambda: f64,
    supports: Vec<f64>,
    beta: Vec<f64>,
}

impl KernelModel {
    /// `supports` is row-major with `memory.real_dim()` columns.
    pub fn from_parts(memory: MemorySpec, degrees: DegreeSet, lambda: f64, supports: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(Error::InvalidParameter("lambda must be positive"));
        }
        let dim = memory.real_dim();
        if supports.len() != beta.len() * dim {
            return Err(Error::LengthMismatch {
                expected: beta.len() * dim,
                actual: supports.len(),
            });
        }
        Ok(Self {
            memory,
            degrees,
            lambda,
            supports,
            beta,
        })
    }

    pub fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    pub fn degrees(&self) -> DegreeSet {
        self.degrees
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Row-major support windows.
    pub fn supports(&self) -> &[f64] {
        &self.supports
    }

    pub fn num_supports(&self) -> usize {
        self.beta.len()
    }
}

impl RealPredictor for KernelModel {
    fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    #[inline]
    fn predict_real_with(&self, y: &[f64], _scratch: &mut [f64]) -> f64 {
        let dim = y.len();
        self.supports
            .chunks_exact(dim)
            .zip(&self.beta)
            .map(|(s, b)| b * odd_power_sum(dot(s, y), self.degrees))
            .sum()
    }
}

fn checked_lambda(gram: &DMatrix<f64>, rows: usize, reg: Regularization) -> Result<f64> {
    let lambda = reg.resolve(gram.trace(), rows)?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidParameter("lambda must be positive"));
    }
    Ok(lambda)
}

/// Solves `(K + lambda I) beta = x` by Cholesky.
pub fn kernel_fit(ts: &TrainingSet, degrees: DegreeSet, reg: Regularization) -> Result<KernelModel> {
    if ts.is_empty() {
        return Err(Error::Empty);
    }
    let mut gram = gram_matrix(ts, degrees)?;
    let lambda = checked_lambda(&gram, ts.rows(), reg)?;
    add_diagonal(&mut gram, lambda);
    let beta = solve_hpd(gram, &DVector::from_column_slice(ts.targets()))?;
    KernelModel::from_parts(
        ts.memory().clone(),
        degrees,
        lambda,
        ts.inputs().to_vec(),
        beta.as_slice().to_vec(),
    )
}

/// Same minimizer as [`kernel_fit`], obtained from the projection normal
/// equations `(lambda K + lambda^2 I) alpha = -lambda x` with `beta = -alpha`.
///
/// The Gram matrix of the constraint vectors `b_i = (kappa(y_i, .), -lambda e_i)`
/// under `<(f, u), (g, v)> = lambda <f, g>_K + u^T v` is `lambda K + lambda^2 I`,
/// and `<(0, x), b_i> = -lambda x_i`.
pub fn kernel_fit_via_projection(ts: &TrainingSet, degrees: DegreeSet, reg: Regularization) -> Result<KernelModel> {
    if ts.is_empty() {
        return Err(Error::Empty);
    }
    let gram = gram_matrix(ts, degrees)?;
    let lambda = checked_lambda(&gram, ts.rows(), reg)?;
    let mut normal = gram * lambda;
    add_diagonal(&mut normal, lambda * lambda);
    let rhs = DVector::from_iterator(ts.rows(), ts.targets().iter().map(|x| -lambda * x));
    let alpha = solve_hpd(normal, &rhs)?;
    KernelModel::from_parts(
        ts.memory().clone(),
        degrees,
        lambda,
        ts.inputs().to_vec(),
        alpha.iter().map(|a| -a).collect(),
    )
}
