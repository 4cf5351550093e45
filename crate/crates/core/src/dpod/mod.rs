//! Digital post-distortion: learning an inverse of the lowpass-filtered PA
//! nonlinearity from (clean, received) sample pairs.
//!
//! Complex windows are lifted to `R^{2L}` with [`xi`](crate::signal::xi) and
//! [`xi_rot`](crate::signal::xi_rot); any odd real predictor `f` then yields
//! the complex map `g(y) = f(xi(y)) + j f(xi_rot(y))`, which satisfies
//! `g(j y) = j g(y)` by construction. Two real predictors are provided: an
//! explicit odd-degree Volterra series and its implicit counterpart, ridge
//! regression with the polynomial kernel `sum_{k in D} (u^T v)^k`. A complex
//! memory polynomial serves as the baseline.

mod compensate;
mod kernel;
mod memory;
mod monomial;
mod mp;
mod training;
mod volterra;

use num_complex::Complex64;

pub use compensate::{compensate, predict_complex, Compensator, RealPredictor};
pub use kernel::{gram_matrix, kernel_eval, kernel_fit, kernel_fit_via_projection, odd_power_sum, KernelModel};
pub use memory::{DegreeSet, MemorySpec};
pub use monomial::{enumerate_monomials, monomial_count, MonomialBasis, BASIS_ORDER_TAG};
pub use mp::{mp_design_matrix, mp_fit, mp_fit_blocks, MpModel};
pub use training::{build_training_set, TrainingSet};
pub use volterra::{design_matrix, linear_least_squares, volterra_fit, VolterraModel};

use crate::error::{Error, Result};

/// Default kernel regularization scale: `lambda = 0.005 tr(K) / rows`.
pub const DEFAULT_KERNEL_RHO: f64 = 0.005;

/// How the ridge / kernel regularizer is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// Use the value as is.
    Absolute(f64),
    /// `rho * tr(G) / rows`, with `G` the Gram matrix (`K` for kernels,
    /// `A^T A` for Volterra).
    TraceRelative(f64),
}

impl Regularization {
    pub fn default_kernel() -> Self {
        Regularization::TraceRelative(DEFAULT_KERNEL_RHO)
    }

    pub fn resolve(&self, trace: f64, rows: usize) -> Result<f64> {
        let value = match *self {
            Regularization::Absolute(v) => v,
            Regularization::TraceRelative(rho) => rho * trace / rows as f64,
        };
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidParameter("regularization must be finite and non-negative"));
        }
        Ok(value)
    }
}

/// Any trained compensator.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Volterra(VolterraModel),
    Kernel(KernelModel),
    Mp(MpModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Volterra(_) => "volterra",
            Model::Kernel(_) => "kernel",
            Model::Mp(_) => "mp",
        }
    }
}

impl Compensator for Model {
    fn memory(&self) -> &MemorySpec {
        match self {
            Model::Volterra(m) => Compensator::memory(m),
            Model::Kernel(m) => Compensator::memory(m),
            Model::Mp(m) => Compensator::memory(m),
        }
    }

    fn predict_window(&self, window: &[Complex64]) -> Complex64 {
        match self {
            Model::Volterra(m) => m.predict_window(window),
            Model::Kernel(m) => m.predict_window(window),
            Model::Mp(m) => m.predict_window(window),
        }
    }

    fn compensate_range(&self, received: &[Complex64], range: core::ops::Range<usize>, out: &mut [Complex64]) {
        match self {
            Model::Volterra(m) => m.compensate_range(received, range, out),
            Model::Kernel(m) => m.compensate_range(received, range, out),
            Model::Mp(m) => m.compensate_range(received, range, out),
        }
    }
}
