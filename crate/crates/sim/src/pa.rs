//! PA at the oversampled rate, and the coefficient file format.
//!
//! Coefficient files are TOML:
//!
//! ```toml
//! name = "cubic"
//! oversampling = 3          # intended rate, informational
//!
//! [diagonal]                # a_kl c_{n-l} |c_{n-l}|^{2k}
//! orders = [0, 1]
//! shifts = [0]
//! coefficients = [
//!   { k = 0, l = 0, re = 1.0, im = 0.0 },
//!   { k = 1, l = 0, re = -0.1, im = 0.0 },
//! ]
//!
//! [cross]                   # optional: b_klm c_{n-l} |c_{n-l-m}|^{2k}
//! orders = [1]
//! shifts = [0]
//! envelope_shifts = [1]
//! coefficients = [{ k = 1, l = 0, m = 1, re = 0.01, im = 0.0 }]
//! ```

use std::path::Path;

use dpod_core::gmp::{gmp_apply, backoff_gain, CrossTerm, DiagonalTerm, GmpCoefficients, PaConfig};
use dpod_core::signal::DomainSignal;
use dpod_core::{Complex64, Result};
use serde::Deserialize;

use crate::dft::{dft, idft};
use crate::error::{SimError, SimResult};

/// Zero-pads the centered spectrum to `U N` bins; the `sqrt(U)` factor keeps
/// per-sample amplitude, so the clamp level means the same at both rates.
pub fn resample_up(x: &[Complex64], u: usize) -> Result<Vec<Complex64>> {
    if u <= 1 {
        return Ok(x.to_vec());
    }
    let n = x.len();
    let spec = dft(x)?;
    let un = u * n;
    let offset = un / 2 - n / 2;
    let g = (u as f64).sqrt();
    let mut wide = vec![Complex64::new(0.0, 0.0); un];
    for (k, v) in spec.iter().enumerate() {
        wide[k + offset] = v * g;
    }
    idft(&wide)
}

/// Keeps the `n` central bins of the `U n` spectrum.
pub fn resample_down(y: &[Complex64], u: usize) -> Result<Vec<Complex64>> {
    if u <= 1 {
        return Ok(y.to_vec());
    }
    if !y.len().is_multiple_of(u) {
        return Err(dpod_core::Error::InvalidParameter("length is not a multiple of the oversampling factor"));
    }
    let un = y.len();
    let n = un / u;
    let spec = dft(y)?;
    let offset = un / 2 - n / 2;
    let g = 1.0 / (u as f64).sqrt();
    let narrow: Vec<_> = spec[offset..offset + n].iter().map(|v| v * g).collect();
    idft(&narrow)
}

/// PA output together with the real gain applied to reach the backoff.
#[derive(Debug, Clone)]
pub struct PaOutput {
    pub signal: DomainSignal,
    pub gain: f64,
}

/// scale to backoff, upsample, GMP, downsample.
pub fn pa_chain(x: &DomainSignal, c: &GmpCoefficients, cfg: &PaConfig) -> Result<DomainSignal> {
    Ok(pa_chain_with_gain(x, c, cfg)?.signal)
}

pub fn pa_chain_with_gain(x: &DomainSignal, c: &GmpCoefficients, cfg: &PaConfig) -> Result<PaOutput> {
    let t = x.expect_time()?;
    let gain = backoff_gain(t, cfg.backoff_db())?;
    let scaled: Vec<_> = t.iter().map(|s| s * gain).collect();
    let up = resample_up(&scaled, cfg.oversampling())?;
    let out = resample_down(&gmp_apply(&up, c), cfg.oversampling())?;
    Ok(PaOutput {
        signal: DomainSignal::time(out)?,
        gain,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientFile {
    #[allow(dead_code)]
    name: Option<String>,
    #[allow(dead_code)]
    oversampling: Option<usize>,
    diagonal: DiagonalSection,
    cross: Option<CrossSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalSection {
    orders: Vec<u32>,
    shifts: Vec<i64>,
    coefficients: Vec<DiagonalEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalEntry {
    k: u32,
    l: i64,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossSection {
    orders: Vec<u32>,
    shifts: Vec<i64>,
    envelope_shifts: Vec<i64>,
    coefficients: Vec<CrossEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossEntry {
    k: u32,
    l: i64,
    m: i64,
    re: f64,
    #[serde(default)]
    im: f64,
}

pub fn parse_coefficients(text: &str) -> SimResult<GmpCoefficients> {
    let f: CoefficientFile = toml::from_str(text)?;
    let diagonal = f
        .diagonal
        .coefficients
        .iter()
        .map(|e| DiagonalTerm {
            k: e.k,
            l: e.l,
            coefficient: Complex64::new(e.re, e.im),
        })
        .collect();
    let (orders, shifts, env, cross) = match f.cross {
        Some(x) => {
            let terms = x
                .coefficients
                .iter()
                .map(|e| CrossTerm {
                    k: e.k,
                    l: e.l,
                    m: e.m,
                    coefficient: Complex64::new(e.re, e.im),
                })
                .collect();
            (x.orders, x.shifts, x.envelope_shifts, terms)
        }
        None => (vec![], vec![], vec![], vec![]),
    };
    Ok(GmpCoefficients::new(f.diagonal.orders, f.diagonal.shifts, diagonal, orders, shifts, env, cross)?)
}

pub const MEMORYLESS_FIXTURE: &str = include_str!("../fixtures/pa_memoryless_d5.toml");
pub const GMP_FIXTURE: &str = include_str!("../fixtures/pa_gmp_cross.toml");

/// Resolves `builtin:<name>` or a file path.
pub fn load_coefficients(source: &str) -> SimResult<GmpCoefficients> {
    match source.strip_prefix("builtin:") {
        Some("memoryless-d5") => parse_coefficients(MEMORYLESS_FIXTURE),
        Some("gmp-cross") => parse_coefficients(GMP_FIXTURE),
        Some("linear") => Ok(GmpCoefficients::linear()),
        Some(other) => Err(SimError::Config(format!("unknown builtin PA model {other:?}"))),
        None => {
            let text = std::fs::read_to_string(Path::new(source)).map_err(|e| SimError::io(source, e))?;
            parse_coefficients(&text)
        }
    }
}
