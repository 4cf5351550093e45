//! Complex memory-polynomial compensator, the baseline without cross terms:
//! `x_n = sum_{k in D} sum_{i} c_{k,i} w_i |w_i|^{k-1}` over the cyclic window `w`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::compensate::Compensator;
use super::memory::{DegreeSet, MemorySpec};
use crate::error::{Error, Result};
use crate::linalg::solve_hpd;
use crate::signal::cyclic_window_into;

#[derive(Debug, Clone, PartialEq)]
pub struct MpModel {
    memory: MemorySpec,
    degrees: DegreeSet,
    /// Degree-major: index `k_idx * L + i`.
    coefficients: Vec<Complex64>,
}

#[inline]
fn write_terms(window: &[Complex64], degrees: DegreeSet, out: &mut [Complex64]) {
    let l = window.len();
    for (i, w) in window.iter().enumerate() {
        let mag = w.norm();
        for (kk, k) in degrees.iter().enumerate() {
            out[kk * l + i] = w * mag.powi(k as i32 - 1);
        }
    }
}

impl MpModel {
    pub fn from_parts(memory: MemorySpec, degrees: DegreeSet, coefficients: Vec<Complex64>) -> Result<Self> {
        let expected = memory.len() * degrees.len();
        if coefficients.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: coefficients.len(),
            });
        }
        Ok(Self {
            memory,
            degrees,
            coefficients,
        })
    }

    pub fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    pub fn degrees(&self) -> DegreeSet {
        self.degrees
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient of the term `w_i |w_i|^{k-1}`, where `i` indexes the shift.
    pub fn coefficient(&self, degree: usize, shift_index: usize) -> Option<Complex64> {
        let kk = self.degrees.iter().position(|k| k == degree)?;
        self.coefficients.get(kk * self.memory.len() + shift_index).copied()
    }
}

impl Compensator for MpModel {
    fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    fn predict_window(&self, window: &[Complex64]) -> Complex64 {
        let mut terms = vec![Complex64::new(0.0, 0.0); self.coefficients.len()];
        write_terms(window, self.degrees, &mut terms);
        terms.iter().zip(&self.coefficients).map(|(t, c)| t * c).sum()
    }

    fn compensate_range(&self, received: &[Complex64], range: core::ops::Range<usize>, out: &mut [Complex64]) {
        let mut window = vec![Complex64::new(0.0, 0.0); self.memory.len()];
        let mut terms = vec![Complex64::new(0.0, 0.0); self.coefficients.len()];
        for (o, n) in out.iter_mut().zip(range) {
            cyclic_window_into(received, n, &self.memory, &mut window);
            write_terms(&window, self.degrees, &mut terms);
            *o = terms.iter().zip(&self.coefficients).map(|(t, c)| t * c).sum();
        }
    }
}

/// Complex design matrix of memory-polynomial terms, one row per sample.
pub fn mp_design_matrix(received: &[Complex64], memory: &MemorySpec, degrees: DegreeSet) -> DMatrix<Complex64> {
    let cols = memory.len() * degrees.len();
    let mut a = DMatrix::<Complex64>::zeros(received.len(), cols);
    let mut window = vec![Complex64::new(0.0, 0.0); memory.len()];
    let mut row = vec![Complex64::new(0.0, 0.0); cols];
    for n in 0..received.len() {
        cyclic_window_into(received, n, memory, &mut window);
        write_terms(&window, degrees, &mut row);
        for (j, v) in row.iter().enumerate() {
            a[(n, j)] = *v;
        }
    }
    a
}

/// Least-squares fit of the memory polynomial mapping `received` onto
/// `clean`, through the complex normal equations `A^H A c = A^H x`.
pub fn mp_fit(clean: &[Complex64], received: &[Complex64], memory: &MemorySpec, degrees: DegreeSet) -> Result<MpModel> {
    mp_fit_blocks(&[(clean, received)], memory, degrees)
}

/// As [`mp_fit`], pooling several independent `(clean, received)` blocks.
/// Windows wrap within each block.
pub fn mp_fit_blocks(blocks: &[(&[Complex64], &[Complex64])], memory: &MemorySpec, degrees: DegreeSet) -> Result<MpModel> {
    let cols = memory.len() * degrees.len();
    let mut normal = DMatrix::<Complex64>::zeros(cols, cols);
    let mut rhs = DVector::<Complex64>::zeros(cols);
    let mut rows = 0;
    for &(clean, received) in blocks {
        if clean.len() != received.len() {
            return Err(Error::LengthMismatch {
                expected: clean.len(),
                actual: received.len(),
            });
        }
        if clean.is_empty() {
            return Err(Error::Empty);
        }
        let a = mp_design_matrix(received, memory, degrees);
        let ah = a.adjoint();
        rhs += &ah * DVector::from_column_slice(clean);
        normal += ah * &a;
        rows += clean.len();
    }
    if rows == 0 {
        return Err(Error::Empty);
    }
    if rows < cols {
        return Err(Error::RankDeficient);
    }
    let c = solve_hpd(normal, &rhs).map_err(|_| Error::RankDeficient)?;
    if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::RankDeficient);
    }
    MpModel::from_parts(memory.clone(), degrees, c.as_slice().to_vec())
}
