//! Clamped generalized memory polynomial (GMP) power-amplifier model.
//!
//! For the clamped input `c_n = x_n / max(|x_n|, 1)` the output is
//!
//! ```text
//! q_n = sum_{k in Ka} sum_{l in La} a_kl c_{n-l} |c_{n-l}|^{2k}
//!     + sum_{k in Kb} sum_{l in Lb} sum_{m in Mb} b_klm c_{n-l} |c_{n-l-m}|^{2k}
//! ```
//!
//! with every time index taken modulo the block length.

use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagonalTerm {
    pub k: u32,
    pub l: i64,
    pub coefficient: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossTerm {
    pub k: u32,
    pub l: i64,
    pub m: i64,
    pub coefficient: Complex64,
}

/// Index sets and coefficients of a GMP model.
#[derive(Debug, Clone, PartialEq)]
pub struct GmpCoefficients {
    diag_orders: Vec<u32>,
    diag_shifts: Vec<i64>,
    diagonal: Vec<DiagonalTerm>,
    cross_orders: Vec<u32>,
    cross_shifts: Vec<i64>,
    envelope_shifts: Vec<i64>,
    cross: Vec<CrossTerm>,
}

impl GmpCoefficients {
    /// Validates that every term lies in the declared index sets.
    pub fn new(
        diag_orders: Vec<u32>,
        diag_shifts: Vec<i64>,
        diagonal: Vec<DiagonalTerm>,
        cross_orders: Vec<u32>,
        cross_shifts: Vec<i64>,
        envelope_shifts: Vec<i64>,
        cross: Vec<CrossTerm>,
    ) -> Result<Self> {
        for t in &diagonal {
            if !diag_orders.contains(&t.k) {
                return Err(Error::CoefficientOutsideIndexSet("diagonal order k"));
            }
            if !diag_shifts.contains(&t.l) {
                return Err(Error::CoefficientOutsideIndexSet("diagonal shift l"));
            }
        }
        if cross_orders.is_empty() && !cross.is_empty() {
            return Err(Error::CoefficientOutsideIndexSet("cross term without cross orders"));
        }
        for t in &cross {
            if !cross_orders.contains(&t.k) {
                return Err(Error::CoefficientOutsideIndexSet("cross order k"));
            }
            if !cross_shifts.contains(&t.l) {
                return Err(Error::CoefficientOutsideIndexSet("cross shift l"));
            }
            if !envelope_shifts.contains(&t.m) {
                return Err(Error::CoefficientOutsideIndexSet("envelope shift m"));
            }
        }
        if diagonal.iter().map(|t| t.coefficient).chain(cross.iter().map(|t| t.coefficient)).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("GMP coefficients"));
        }
        Ok(Self {
            diag_orders,
            diag_shifts,
            diagonal,
            cross_orders,
            cross_shifts,
            envelope_shifts,
            cross,
        })
    }

    /// Memoryless polynomial `sum_k a_k c |c|^{2k}`, with `coefficients[k] = a_k`.
    pub fn memoryless(coefficients: &[Complex64]) -> Self {
        let diagonal = coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| DiagonalTerm {
                k: k as u32,
                l: 0,
                coefficient: c,
            })
            .collect();
        Self {
            diag_orders: (0..coefficients.len() as u32).collect(),
            diag_shifts: alloc::vec![0],
            diagonal,
            cross_orders: Vec::new(),
            cross_shifts: Vec::new(),
            envelope_shifts: Vec::new(),
            cross: Vec::new(),
        }
    }

    /// Unit linear term only; the output equals the clamped input.
    pub fn linear() -> Self {
        Self::memoryless(&[Complex64::new(1.0, 0.0)])
    }

    pub fn diagonal(&self) -> &[DiagonalTerm] {
        &self.diagonal
    }

    pub fn cross(&self) -> &[CrossTerm] {
        &self.cross
    }

    pub fn diag_orders(&self) -> &[u32] {
        &self.diag_orders
    }

    pub fn diag_shifts(&self) -> &[i64] {
        &self.diag_shifts
    }

    pub fn cross_orders(&self) -> &[u32] {
        &self.cross_orders
    }

    pub fn cross_shifts(&self) -> &[i64] {
        &self.cross_shifts
    }

    pub fn envelope_shifts(&self) -> &[i64] {
        &self.envelope_shifts
    }

    /// No cross terms.
    pub fn is_memory_polynomial(&self) -> bool {
        self.cross.is_empty()
    }

    pub fn is_memoryless(&self) -> bool {
        self.cross.is_empty() && self.diag_shifts.iter().all(|&l| l == 0)
    }
}

/// `x / max(|x|, 1)` per sample.
pub fn clamp(x: &[Complex64]) -> Vec<Complex64> {
    x.iter().map(|&s| s / s.norm().max(1.0)).collect()
}

#[inline]
fn wrap(n: usize, shift: i64, len: usize) -> usize {
    (n as i64 - shift).rem_euclid(len as i64) as usize
}

/// Evaluates the clamped GMP with cyclic time shifts.
pub fn gmp_apply(x: &[Complex64], c: &GmpCoefficients) -> Vec<Complex64> {
    let len = x.len();
    let xc = clamp(x);
    let power: Vec<f64> = xc.iter().map(|s| s.norm_sqr()).collect();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); len];
    for t in &c.diagonal {
        let k = t.k as i32;
        for (n, o) in out.iter_mut().enumerate() {
            let i = wrap(n, t.l, len);
            *o += t.coefficient * (xc[i] * power[i].powi(k));
        }
    }
    for t in &c.cross {
        let k = t.k as i32;
        for (n, o) in out.iter_mut().enumerate() {
            let i = wrap(n, t.l, len);
            let e = wrap(n, t.l + t.m, len);
            *o += t.coefficient * (xc[i] * power[e].powi(k));
        }
    }
    out
}

/// Real gain that brings the RMS of `x` to `10^(-backoff_db / 20)`, i.e.
/// `backoff_db` below the clamp level.
pub fn backoff_gain(x: &[Complex64], backoff_db: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    if !backoff_db.is_finite() {
        return Err(Error::InvalidParameter("backoff must be finite"));
    }
    let mean_power = x.iter().map(|s| s.norm_sqr()).sum::<f64>() / x.len() as f64;
    if mean_power == 0.0 {
        return Err(Error::ZeroPower);
    }
    Ok(10f64.powf(-backoff_db / 20.0) / mean_power.sqrt())
}

pub fn scale_to_backoff(x: &[Complex64], backoff_db: f64) -> Result<Vec<Complex64>> {
    let g = backoff_gain(x, backoff_db)?;
    Ok(x.iter().map(|s| s * g).collect())
}

/// Operating point of the PA: input backoff and oversampling factor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PaConfig {
    backoff_db: f64,
    oversampling: usize,
}

impl PaConfig {
    pub fn new(backoff_db: f64, oversampling: usize) -> Result<Self> {
        if !backoff_db.is_finite() || backoff_db < 0.0 {
            return Err(Error::InvalidParameter("backoff must be a finite non-negative dB value"));
        }
        if oversampling == 0 {
            return Err(Error::InvalidParameter("oversampling must be at least 1"));
        }
        Ok(Self {
            backoff_db,
            oversampling,
        })
    }

    pub fn backoff_db(&self) -> f64 {
        self.backoff_db
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }
}
