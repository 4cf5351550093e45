//! DFT-s-OFDM modulation: `s_t = F_N^{-1} S F_M s_d` and its left inverse.

use dpod_core::signal::{subcarrier_demap, subcarrier_map, DomainSignal, SubcarrierConfig};
use dpod_core::{Complex64, Error, Result};

use crate::dft::{dft, idft};

pub fn dfts_modulate(s_d: &[Complex64], cfg: &SubcarrierConfig) -> Result<DomainSignal> {
    if s_d.len() != cfg.data_size() {
        return Err(Error::LengthMismatch {
            expected: cfg.data_size(),
            actual: s_d.len(),
        });
    }
    let s_f = dft(s_d)?;
    DomainSignal::time(idft(&subcarrier_map(&s_f, cfg)?)?)
}

/// `F_M^{-1} S^T F_N x`.
pub fn dfts_demodulate(x: &DomainSignal, cfg: &SubcarrierConfig) -> Result<Vec<Complex64>> {
    let t = x.expect_time()?;
    if t.len() != cfg.fft_size() {
        return Err(Error::LengthMismatch {
            expected: cfg.fft_size(),
            actual: t.len(),
        });
    }
    idft(&subcarrier_demap(&dft(t)?, cfg)?)
}
