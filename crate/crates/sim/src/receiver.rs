//! Known-channel equalization and the two compensation placements.

use dpod_core::equalizer::{equalize, EqualizerKind};
use dpod_core::qam::{qam_demap_hard, BitBlock, QamConstellation};
use dpod_core::signal::{subcarrier_demap, subcarrier_map, Domain, DomainSignal, SubcarrierConfig};
use dpod_core::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::dft::{dft, idft};
use crate::waveform::{dfts_demodulate, dfts_modulate};

/// Where the compensator sees the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Equalized and band-limited time signal, `N` samples.
    TimeDomainEq,
    /// Equalized data symbols after the inverse precoder, `M` samples.
    DftSDomain,
}

impl Placement {
    pub fn name(&self) -> &'static str {
        match self {
            Placement::TimeDomainEq => "time-domain-eq",
            Placement::DftSDomain => "dft-s-domain",
        }
    }
}

/// `dft`, per-bin equalization, then either `F_M^{-1} S^T` (DFT-s) or
/// `F_N^{-1} S S^T` (time).
pub fn receive_to_domain(
    x_t: &DomainSignal,
    h: &ChannelRealization,
    kind: EqualizerKind,
    placement: Placement,
    cfg: &SubcarrierConfig,
) -> Result<DomainSignal> {
    let t = x_t.expect_time()?;
    if t.len() != cfg.fft_size() {
        return Err(Error::LengthMismatch {
            expected: cfg.fft_size(),
            actual: t.len(),
        });
    }
    let h_f = h.frequency_response(t.len())?;
    // only the data bins matter; guard bins are discarded below
    let bins = cfg.data_bins();
    let x_f = dft(t)?;
    let eq = equalize(&x_f[bins.clone()], &h_f[bins], kind)?;
    match placement {
        Placement::DftSDomain => DomainSignal::dfts(idft(&eq)?),
        Placement::TimeDomainEq => DomainSignal::time(idft(&subcarrier_map(&eq, cfg)?)?),
    }
}

/// The clean signal the compensator should reproduce in each placement.
pub fn reference_signal(s_d: &[Complex64], placement: Placement, cfg: &SubcarrierConfig) -> Result<DomainSignal> {
    match placement {
        Placement::DftSDomain => DomainSignal::dfts(s_d.to_vec()),
        Placement::TimeDomainEq => dfts_modulate(s_d, cfg),
    }
}

/// Estimated data symbols from a compensated signal in either placement.
pub fn estimate_symbols(compensated: &DomainSignal, cfg: &SubcarrierConfig) -> Result<Vec<Complex64>> {
    match compensated.domain() {
        Domain::DftS(m) if m == cfg.data_size() => Ok(compensated.samples().to_vec()),
        Domain::Time(_) => dfts_demodulate(compensated, cfg),
        other => Err(Error::DomainMismatch {
            expected: "time or DFT-s",
            actual: other.name(),
        }),
    }
}

pub fn decide_bits(compensated: &DomainSignal, cfg: &SubcarrierConfig, constellation: &QamConstellation) -> Result<BitBlock> {
    Ok(qam_demap_hard(&estimate_symbols(compensated, cfg)?, constellation))
}

/// Band-limits a time signal: `F_N^{-1} S S^T F_N x`.
pub fn lowpass_project(x: &[Complex64], cfg: &SubcarrierConfig) -> Result<Vec<Complex64>> {
    idft(&subcarrier_map(&subcarrier_demap(&dft(x)?, cfg)?, cfg)?)
}
