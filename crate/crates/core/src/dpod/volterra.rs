use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::compensate::RealPredictor;
use super::memory::{DegreeSet, MemorySpec};
use super::monomial::{enumerate_monomials, MonomialBasis};
use super::training::TrainingSet;
use super::Regularization;
use crate::error::{Error, Result};
use crate::linalg::{add_diagonal, least_squares_qr, solve_hpd};

/// Odd-degree real Volterra series `f(y) = h^T a(y)` over the embedded window.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraModel {
    memory: MemorySpec,
    basis: MonomialBasis,
    coefficients: Vec<f64>,
    ridge: f64,
}

impl VolterraModel {
    pub fn from_parts(memory: MemorySpec, degrees: DegreeSet, coefficients: Vec<f64>) -> Result<Self> {
        let basis = enumerate_monomials(memory.real_dim(), degrees);
        if coefficients.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                actual: coefficients.len(),
            });
        }
        Ok(Self {
            memory,
            basis,
            coefficients,
            ridge: 0.0,
        })
    }

    pub fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    pub fn degrees(&self) -> DegreeSet {
        self.basis.degrees()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Ridge actually applied during fitting (0 for plain least squares).
    pub fn ridge(&self) -> f64 {
        self.ridge
    }
}

impl RealPredictor for VolterraModel {
    fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    fn scratch_len(&self) -> usize {
        self.basis.scratch_len() + self.basis.len()
    }

    #[inline]
    fn predict_real_with(&self, y: &[f64], scratch: &mut [f64]) -> f64 {
        let (nodes, features) = scratch.split_at_mut(self.basis.scratch_len());
        self.basis.evaluate_into(y, nodes, features);
        features.iter().zip(&self.coefficients).map(|(a, h)| a * h).sum()
    }
}

/// Design matrix `A` with one row of monomial features per training row.
pub fn design_matrix(ts: &TrainingSet, basis: &MonomialBasis) -> Result<DMatrix<f64>> {
    if basis.num_vars() != ts.dim() {
        return Err(Error::LengthMismatch {
            expected: ts.dim(),
            actual: basis.num_vars(),
        });
    }
    let p = basis.len();
    let rows = ts.rows();
    let mut a = DMatrix::<f64>::zeros(rows, p);
    let mut scratch = vec![0.0; basis.scratch_len()];
    let mut row = vec![0.0; p];
    for i in 0..rows {
        basis.evaluate_into(ts.input(i), &mut scratch, &mut row);
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    Ok(a)
}

/// Minimizes `||a h - x||^2 + ridge * ||h||^2`: QR for zero ridge, Cholesky
/// on the regularized normal equations otherwise.
pub fn linear_least_squares(a: DMatrix<f64>, x: &DVector<f64>, ridge: f64) -> Result<DVector<f64>> {
    if ridge.is_nan() || ridge < 0.0 {
        return Err(Error::InvalidParameter("ridge must be non-negative"));
    }
    let h = if ridge == 0.0 {
        least_squares_qr(a, x)?
    } else {
        // explicit transpose routes the product through the blocked GEMM
        let at = a.transpose();
        let rhs = &at * x;
        let mut normal = at * &a;
        add_diagonal(&mut normal, ridge);
        solve_hpd(normal, &rhs)?
    };
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::RankDeficient);
    }
    Ok(h)
}

/// Fits the Volterra kernel by (ridge-regularized) least squares,
/// minimizing `sum (h^T a_i - x_i)^2 + ridge * ||h||^2`.
///
/// With zero ridge the system is solved by Householder QR and a
/// rank-deficient design is an error. A positive ridge uses the Cholesky
/// factorization of the regularized normal equations.
pub fn volterra_fit(ts: &TrainingSet, basis: MonomialBasis, ridge: Regularization) -> Result<VolterraModel> {
    if ts.is_empty() {
        return Err(Error::Empty);
    }
    let a = design_matrix(ts, &basis)?;
    let x = DVector::from_column_slice(ts.targets());
    let trace = a.iter().map(|v| v * v).sum::<f64>();
    let ridge = ridge.resolve(trace, ts.rows())?;
    let h = linear_least_squares(a, &x, ridge)?;
    Ok(VolterraModel {
        memory: ts.memory().clone(),
        basis,
        coefficients: h.as_slice().to_vec(),
        ridge,
    })
}
