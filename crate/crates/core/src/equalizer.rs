//! One-tap frequency-domain equalization.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest channel magnitude accepted by zero forcing.
pub const ZF_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EqualizerKind {
    ZeroForcing,
    /// LMMSE with noise variance per bin.
    Lmmse(f64),
}

/// Divides (ZF) or Wiener-filters (LMMSE) each bin of `y` by `h`.
pub fn equalize(y: &[Complex64], h: &[Complex64], kind: EqualizerKind) -> Result<Vec<Complex64>> {
    if y.len() != h.len() {
        return Err(Error::LengthMismatch {
            expected: h.len(),
            actual: y.len(),
        });
    }
    match kind {
        EqualizerKind::ZeroForcing => y
            .iter()
            .zip(h)
            .enumerate()
            .map(|(bin, (&yk, &hk))| {
                let magnitude = hk.norm();
                if magnitude < ZF_GUARD || !magnitude.is_finite() {
                    Err(Error::SingularChannel { bin, magnitude })
                } else {
                    Ok(yk / hk)
                }
            })
            .collect(),
        EqualizerKind::Lmmse(sigma2) => {
            if !sigma2.is_finite() || sigma2 < 0.0 {
                return Err(Error::InvalidParameter("noise variance must be finite and non-negative"));
            }
            y.iter()
                .zip(h)
                .enumerate()
                .map(|(bin, (&yk, &hk))| {
                    let d = hk.norm_sqr() + sigma2;
                    if d < ZF_GUARD * ZF_GUARD {
                        Err(Error::SingularChannel { bin, magnitude: hk.norm() })
                    } else {
                        Ok(yk * hk.conj() / d)
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_forcing_inverts() {
        let h = vec![c(1.0, 1.0), c(0.5, -2.0)];
        let x = vec![c(0.3, 0.1), c(-1.0, 0.2)];
        let y: Vec<_> = x.iter().zip(&h).map(|(a, b)| a * b).collect();
        let z = equalize(&y, &h, EqualizerKind::ZeroForcing).unwrap();
        for (a, b) in z.iter().zip(&x) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_forcing_guard() {
        let err = equalize(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(1e-12, 0.0)], EqualizerKind::ZeroForcing);
        assert!(matches!(err, Err(Error::SingularChannel { bin: 1, .. })));
    }

    #[test]
    fn lmmse_limits() {
        let h = vec![c(0.6, 0.8)];
        let y = vec![c(0.2, -0.4)];
        let zf = equalize(&y, &h, EqualizerKind::ZeroForcing).unwrap();
        let l0 = equalize(&y, &h, EqualizerKind::Lmmse(0.0)).unwrap();
        assert!((zf[0] - l0[0]).norm() < 1e-15);
        let l = equalize(&y, &h, EqualizerKind::Lmmse(1.0)).unwrap();
        assert!((l[0] - zf[0] * 0.5).norm() < 1e-15);
        assert!(equalize(&y, &[c(0.0, 0.0)], EqualizerKind::Lmmse(0.1)).is_ok());
        assert!(equalize(&y, &h, EqualizerKind::Lmmse(-1.0)).is_err());
    }
}
