//! Cyclic multipath channel, AWGN, and block-fading taps from a power-delay
//! profile.

use dpod_core::signal::DomainSignal;
use dpod_core::{Complex64, Error, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dft::dft;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Empty);
        }
        if taps.iter().all(|t| t.norm_sqr() == 0.0) {
            return Err(Error::ZeroPower);
        }
        if taps.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::NonFinite("channel taps"));
        }
        Ok(Self { taps })
    }

    pub fn identity() -> Self {
        Self {
            taps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    pub fn scaled(&self, g: f64) -> Self {
        Self {
            taps: self.taps.iter().map(|t| t * g).collect(),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.taps.len() > n {
            return Err(Error::InvalidParameter("channel longer than the symbol"));
        }
        Ok(())
    }

    /// `sqrt(N) dft(h)` of the zero-padded taps, so that
    /// `dft(h (*) x) = H . dft(x)`.
    pub fn frequency_response(&self, n: usize) -> Result<Vec<Complex64>> {
        self.check_len(n)?;
        let mut padded = vec![Complex64::new(0.0, 0.0); n];
        padded[..self.taps.len()].copy_from_slice(&self.taps);
        let s = (n as f64).sqrt();
        Ok(dft(&padded)?.into_iter().map(|v| v * s).collect())
    }
}

pub fn apply_channel(x: &DomainSignal, h: &ChannelRealization) -> Result<DomainSignal> {
    let t = x.expect_time()?;
    let n = t.len();
    h.check_len(n)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (d, &tap) in h.taps.iter().enumerate() {
        if tap == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += tap * t[(i + n - d) % n];
        }
    }
    DomainSignal::time(out)
}

/// Es/N0 per complex received sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub snr_db: f64,
}

impl NoiseSpec {
    pub fn new(snr_db: f64) -> Result<Self> {
        if snr_db.is_nan() {
            return Err(Error::NonFinite("SNR"));
        }
        Ok(Self { snr_db })
    }
}

/// Circularly-symmetric complex Gaussian with variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

/// Returns the noisy signal and the noise variance used.
pub fn add_awgn<R: Rng + ?Sized>(x: &DomainSignal, noise: NoiseSpec, rng: &mut R) -> Result<(DomainSignal, f64)> {
    let samples = x.samples();
    let p = x.energy() / samples.len() as f64;
    if p == 0.0 {
        return Err(Error::ZeroPower);
    }
    let var = p / 10f64.powf(noise.snr_db / 10.0);
    if var == 0.0 {
        return Ok((x.clone(), 0.0));
    }
    let noisy = samples.iter().map(|s| s + complex_gaussian(rng, var)).collect();
    Ok((DomainSignal::new(noisy, x.domain())?, var))
}

/// Tapped-delay-line power profile. Delays are in samples; the first entry
/// may carry a Ricean K factor, splitting its power into a fixed-amplitude
/// line-of-sight component with uniform phase and a diffuse part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdpProfile {
    pub delays: Vec<usize>,
    pub powers_db: Vec<f64>,
    #[serde(default)]
    pub los_k_db: Option<f64>,
}

impl PdpProfile {
    pub fn validate(&self) -> Result<()> {
        if self.delays.is_empty() {
            return Err(Error::Empty);
        }
        if self.delays.len() != self.powers_db.len() {
            return Err(Error::LengthMismatch {
                expected: self.delays.len(),
                actual: self.powers_db.len(),
            });
        }
        if self.powers_db.iter().chain(self.los_k_db.iter()).any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("power-delay profile"));
        }
        Ok(())
    }

    /// Linear powers scaled to sum to one.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.iter().map(|p| p / total).collect()
    }

    pub fn max_delay(&self) -> usize {
        self.delays.iter().copied().max().unwrap_or(0)
    }

    /// Approximation of a TDL-D profile with 30 ns delay spread: the
    /// standard normalized delays quantized to `sample_rate_hz`. The
    /// delay-zero specular and diffuse paths form the Ricean first tap.
    pub fn tdl_d_like(sample_rate_hz: f64) -> Self {
        const DELAYS: [f64; 13] = [0.0, 0.035, 0.612, 1.363, 1.405, 1.804, 2.596, 1.775, 4.042, 7.937, 9.424, 9.708, 12.525];
        const POWERS: [f64; 13] = [-0.2, -18.8, -21.0, -22.8, -17.9, -20.1, -21.9, -22.9, -27.8, -23.6, -24.8, -30.0, -27.7];
        let lin = |db: f64| 10f64.powf(db / 10.0);
        let (los, diffuse) = (lin(-0.2), lin(-13.5));
        let spread = 30e-9;
        let delays = DELAYS.iter().map(|d| (d * spread * sample_rate_hz).round() as usize).collect();
        let mut powers_db = POWERS.to_vec();
        powers_db[0] = 10.0 * (los + diffuse).log10();
        Self {
            delays,
            powers_db,
            los_k_db: Some(10.0 * (los / diffuse).log10()),
        }
    }
}

pub fn sample_taps<R: Rng + ?Sized>(p: &PdpProfile, rng: &mut R) -> Result<ChannelRealization> {
    p.validate()?;
    let powers = p.normalized_powers();
    let mut taps = vec![Complex64::new(0.0, 0.0); p.max_delay() + 1];
    for (i, (&d, &pw)) in p.delays.iter().zip(&powers).enumerate() {
        match (i, p.los_k_db) {
            (0, Some(k_db)) => {
                let k = 10f64.powf(k_db / 10.0);
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                taps[d] += Complex64::from_polar((pw * k / (k + 1.0)).sqrt(), phase);
                taps[d] += complex_gaussian(rng, pw / (k + 1.0));
            }
            _ => taps[d] += complex_gaussian(rng, pw),
        }
    }
    ChannelRealization::new(taps)
}
