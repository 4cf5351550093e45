//! Domain-tagged signals, the complex/real isomorphism and the cyclic
//! operators shared by the transmitter, the receiver and the compensators.
//!
//! Frequency-domain vectors always use centered bin ordering: bin `k` of an
//! `N`-point spectrum carries frequency `k - N/2` (integer division), so the
//! zero-frequency component sits at index `N/2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Deref;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::dpod::MemorySpec;
use crate::error::{Error, Result};

/// Which representation a sample vector lives in, with its length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Domain {
    /// `N` time-domain samples of one OFDM symbol.
    Time(usize),
    /// `N` centered frequency bins.
    Freq(usize),
    /// `M` samples in the DFT-spread (pre-coding) domain.
    DftS(usize),
}

impl Domain {
    pub fn len(&self) -> usize {
        match *self {
            Domain::Time(n) | Domain::Freq(n) | Domain::DftS(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Time(_) => "time",
            Domain::Freq(_) => "frequency",
            Domain::DftS(_) => "DFT-s",
        }
    }
}

/// A finite complex sample vector tagged with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSignal {
    samples: Vec<Complex64>,
    domain: Domain,
}

impl DomainSignal {
    pub fn new(samples: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if samples.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                actual: samples.len(),
            });
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::NonFinite("signal samples"));
        }
        Ok(Self { samples, domain })
    }

    pub fn time(samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len();
        Self::new(samples, Domain::Time(n))
    }

    pub fn freq(samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len();
        Self::new(samples, Domain::Freq(n))
    }

    pub fn dfts(samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len();
        Self::new(samples, Domain::DftS(n))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fails unless the signal is in the time domain.
    pub fn expect_time(&self) -> Result<&[Complex64]> {
        match self.domain {
            Domain::Time(_) => Ok(&self.samples),
            other => Err(Error::DomainMismatch {
                expected: "time",
                actual: other.name(),
            }),
        }
    }

    /// Fails unless the signal is in the DFT-s domain.
    pub fn expect_dfts(&self) -> Result<&[Complex64]> {
        match self.domain {
            Domain::DftS(_) => Ok(&self.samples),
            other => Err(Error::DomainMismatch {
                expected: "DFT-s",
                actual: other.name(),
            }),
        }
    }

    pub fn energy(&self) -> f64 {
        energy(&self.samples)
    }
}

/// Placement of `M` data subcarriers inside an `N`-point centered spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubcarrierConfig {
    fft_size: usize,
    data_size: usize,
    lower_guard: usize,
    upper_guard: usize,
}

impl SubcarrierConfig {
    pub fn new(fft_size: usize, data_size: usize, lower_guard: usize, upper_guard: usize) -> Result<Self> {
        if data_size == 0 || lower_guard + data_size + upper_guard != fft_size {
            return Err(Error::SubcarrierLayout {
                fft: fft_size,
                data: data_size,
                lower: lower_guard,
                upper: upper_guard,
            });
        }
        Ok(Self {
            fft_size,
            data_size,
            lower_guard,
            upper_guard,
        })
    }

    /// Splits the guard band evenly, giving the extra carrier (if any) to the
    /// upper guard.
    pub fn centered(fft_size: usize, data_size: usize) -> Result<Self> {
        if data_size == 0 || data_size > fft_size {
            return Err(Error::SubcarrierLayout {
                fft: fft_size,
                data: data_size,
                lower: 0,
                upper: 0,
            });
        }
        let guard = fft_size - data_size;
        Self::new(fft_size, data_size, guard / 2, guard - guard / 2)
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn data_size(&self) -> usize {
        self.data_size
    }

    pub fn lower_guard(&self) -> usize {
        self.lower_guard
    }

    pub fn upper_guard(&self) -> usize {
        self.upper_guard
    }

    /// Range of occupied bins in centered ordering.
    pub fn data_bins(&self) -> core::ops::Range<usize> {
        self.lower_guard..self.lower_guard + self.data_size
    }
}

/// Real vector with finite entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real vector"));
        }
        Ok(Self(entries))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Deref for RealVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|s| s.norm_sqr()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    energy(x).sqrt()
}

/// Writes `[Re(x); Im(x)]` into `out` (length `2 * x.len()`).
#[inline]
pub fn write_xi(x: &[Complex64], out: &mut [f64]) {
    let n = x.len();
    debug_assert_eq!(out.len(), 2 * n);
    for (i, s) in x.iter().enumerate() {
        out[i] = s.re;
        out[n + i] = s.im;
    }
}

/// Writes `[Im(x); -Re(x)]` into `out`, i.e. `xi(-j x)`.
#[inline]
pub fn write_xi_rot(x: &[Complex64], out: &mut [f64]) {
    let n = x.len();
    debug_assert_eq!(out.len(), 2 * n);
    for (i, s) in x.iter().enumerate() {
        out[i] = s.im;
        out[n + i] = -s.re;
    }
}

/// Isometric isomorphism from `C^N` to `R^{2N}`: real parts stacked over
/// imaginary parts.
pub fn xi(x: &[Complex64]) -> RealVector {
    let mut out = vec![0.0; 2 * x.len()];
    write_xi(x, &mut out);
    RealVector(out)
}

/// The companion embedding `[Im(x); -Re(x)] = xi(-j x)` that recovers the
/// imaginary part of a rotation-equivariant map.
pub fn xi_rot(x: &[Complex64]) -> RealVector {
    let mut out = vec![0.0; 2 * x.len()];
    write_xi_rot(x, &mut out);
    RealVector(out)
}

/// Inverse of [`xi`].
pub fn xi_inv(v: &[f64]) -> Result<Vec<Complex64>> {
    if !v.len().is_multiple_of(2) {
        return Err(Error::LengthMismatch {
            expected: v.len() + 1,
            actual: v.len(),
        });
    }
    let n = v.len() / 2;
    Ok((0..n).map(|i| Complex64::new(v[i], v[n + i])).collect())
}

/// Places `M` data bins into an `N`-point centered spectrum, zeroing guards.
pub fn subcarrier_map(data: &[Complex64], cfg: &SubcarrierConfig) -> Result<Vec<Complex64>> {
    if data.len() != cfg.data_size {
        return Err(Error::LengthMismatch {
            expected: cfg.data_size,
            actual: data.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); cfg.fft_size];
    out[cfg.data_bins()].copy_from_slice(data);
    Ok(out)
}

/// Extracts the `M` data bins of an `N`-point centered spectrum.
pub fn subcarrier_demap(spectrum: &[Complex64], cfg: &SubcarrierConfig) -> Result<Vec<Complex64>> {
    if spectrum.len() != cfg.fft_size {
        return Err(Error::LengthMismatch {
            expected: cfg.fft_size,
            actual: spectrum.len(),
        });
    }
    Ok(spectrum[cfg.data_bins()].to_vec())
}

/// Cyclic convolution by direct summation:
/// `out[n] = sum_k a[k] * b[(n - k) mod N]`.
///
/// Both operands must have the same length; channel taps are zero-padded by
/// the caller.
pub fn cyclic_convolve(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, &ak) in a.iter().enumerate() {
        if ak == Complex64::new(0.0, 0.0) {
            continue;
        }
        // b index (m - k) mod n for output m
        for (m, o) in out.iter_mut().enumerate() {
            let idx = if m >= k { m - k } else { m + n - k };
            *o += ak * b[idx];
        }
    }
    Ok(out)
}

/// Circularly shifts `x` so that `out[n] = x[(n - shift) mod N]`.
pub fn cyclic_shift(x: &[Complex64], shift: isize) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let s = shift.rem_euclid(n as isize) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&x[n - s..]);
    out.extend_from_slice(&x[..n - s]);
    out
}

/// Impulse response of the guard-band projection, i.e. the first column of
/// the circulant `idft . map . demap . dft`.
///
/// Evaluated in closed form as a Dirichlet kernel over the occupied bins, so
/// `b[0] = M / N` exactly.
pub fn lowpass_vector(cfg: &SubcarrierConfig) -> Vec<Complex64> {
    let n = cfg.fft_size as i64;
    let m = cfg.data_size as i64;
    // frequency of the first occupied bin
    let f0 = cfg.lower_guard as i64 - n / 2;
    let two_n = 2 * n;
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|t| {
            if t == 0 {
                return Complex64::new(m as f64 / n as f64, 0.0);
            }
            // phase pi * t * (2 f0 + M - 1) / N, reduced modulo 2N
            let phase_num = ((2 * f0 + m - 1) * t).rem_euclid(two_n);
            let phase = PI * phase_num as f64 / n as f64;
            let num = (PI * ((t * m).rem_euclid(two_n)) as f64 / n as f64).sin();
            let den = (PI * t as f64 / n as f64).sin();
            Complex64::from_polar(scale * num / den, phase)
        })
        .collect()
}

/// Fills `out` with the cyclic memory window `out[i] = y[(n - shifts[i]) mod N]`.
#[inline]
pub fn cyclic_window_into(y: &[Complex64], n: usize, memory: &MemorySpec, out: &mut [Complex64]) {
    let len = y.len() as i64;
    for (o, &shift) in out.iter_mut().zip(memory.shifts()) {
        let idx = (n as i64 - shift).rem_euclid(len) as usize;
        *o = y[idx];
    }
}

/// Cyclic memory window around sample `n`. Negative shifts reach forward in
/// time.
pub fn cyclic_window(y: &[Complex64], n: usize, memory: &MemorySpec) -> Result<Vec<Complex64>> {
    if n >= y.len() {
        return Err(Error::InvalidParameter("window index out of range"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); memory.len()];
    cyclic_window_into(y, n, memory, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn xi_definition() {
        let v = xi(&[c(1.0, 2.0), c(3.0, -1.0)]);
        assert_eq!(&*v, &[1.0, 3.0, 2.0, -1.0]);
        assert_eq!(&*xi(&[c(0.0, 0.0); 2]), &[0.0; 4]);
        assert_eq!(xi_inv(&v).unwrap(), vec![c(1.0, 2.0), c(3.0, -1.0)]);
    }

    #[test]
    fn xi_rot_definition() {
        assert_eq!(&*xi_rot(&[c(1.0, 2.0)]), &[2.0, -1.0]);
        let x = [c(0.3, -1.2), c(-2.0, 0.5)];
        let minus_j: Vec<_> = x.iter().map(|s| s * c(0.0, -1.0)).collect();
        assert_eq!(xi_rot(&x), xi(&minus_j));
        let j: Vec<_> = x.iter().map(|s| s * c(0.0, 1.0)).collect();
        assert_eq!(xi_rot(&j), xi(&x));
    }

    #[test]
    fn map_and_demap() {
        let cfg = SubcarrierConfig::new(4, 2, 1, 1).unwrap();
        let (a, b) = (c(1.0, 1.0), c(-2.0, 0.5));
        let mapped = subcarrier_map(&[a, b], &cfg).unwrap();
        assert_eq!(mapped, vec![c(0.0, 0.0), a, b, c(0.0, 0.0)]);
        assert_eq!(subcarrier_demap(&mapped, &cfg).unwrap(), vec![a, b]);

        let full = SubcarrierConfig::new(3, 3, 0, 0).unwrap();
        let x = vec![a, b, c(0.0, 7.0)];
        assert_eq!(subcarrier_map(&x, &full).unwrap(), x);
        assert_eq!(subcarrier_demap(&x, &full).unwrap(), x);
    }

    #[test]
    fn map_rejects_wrong_sizes() {
        let cfg = SubcarrierConfig::new(4, 2, 1, 1).unwrap();
        assert!(matches!(
            subcarrier_map(&[c(1.0, 0.0)], &cfg),
            Err(Error::LengthMismatch { expected: 2, actual: 1 })
        ));
        assert!(subcarrier_demap(&[c(1.0, 0.0); 3], &cfg).is_err());
        assert!(SubcarrierConfig::new(4, 2, 1, 2).is_err());
        assert!(SubcarrierConfig::new(4, 0, 2, 2).is_err());
    }

    #[test]
    fn centered_guards() {
        let cfg = SubcarrierConfig::centered(4096, 3240).unwrap();
        assert_eq!((cfg.lower_guard(), cfg.upper_guard()), (428, 428));
        let cfg = SubcarrierConfig::centered(16, 13).unwrap();
        assert_eq!((cfg.lower_guard(), cfg.upper_guard()), (1, 2));
    }

    #[test]
    fn convolution_with_deltas() {
        let b = vec![c(1.0, 2.0), c(3.0, 0.0), c(0.0, -1.0), c(0.5, 0.5)];
        let mut delta = vec![c(0.0, 0.0); 4];
        delta[0] = c(1.0, 0.0);
        assert_eq!(cyclic_convolve(&delta, &b).unwrap(), b);
        delta.swap(0, 1);
        assert_eq!(cyclic_convolve(&delta, &b).unwrap(), cyclic_shift(&b, 1));
        assert_eq!(cyclic_shift(&b, 1), vec![b[3], b[0], b[1], b[2]]);
        assert!(cyclic_convolve(&delta, &b[..3]).is_err());
    }

    #[test]
    fn lowpass_full_band_is_delta() {
        let cfg = SubcarrierConfig::new(8, 8, 0, 0).unwrap();
        let b = lowpass_vector(&cfg);
        assert_abs_diff_eq!(b[0].re, 1.0, epsilon = 1e-15);
        for v in &b[1..] {
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn lowpass_dc_tap() {
        for (n, m, gl) in [(4, 2, 1), (16, 13, 1), (256, 202, 27), (10, 3, 7)] {
            let cfg = SubcarrierConfig::new(n, m, gl, n - m - gl).unwrap();
            let b = lowpass_vector(&cfg);
            assert_eq!(b[0], c(m as f64 / n as f64, 0.0));
        }
    }

    /// Explicit product of the unitary centered DFT matrices.
    #[test]
    fn lowpass_matches_matrix_product() {
        let n = 4usize;
        let cfg = SubcarrierConfig::new(4, 2, 1, 1).unwrap();
        let w = |k: usize, t: usize, sign: f64| {
            let f = k as f64 - (n / 2) as f64;
            Complex64::from_polar(1.0 / (n as f64).sqrt(), sign * 2.0 * PI * f * t as f64 / n as f64)
        };
        // first column of F^-1 S S^T F
        let mut col = vec![c(0.0, 0.0); n];
        for (t, out) in col.iter_mut().enumerate() {
            for k in cfg.data_bins() {
                *out += w(k, t, 1.0) * w(k, 0, -1.0);
            }
        }
        let b = lowpass_vector(&cfg);
        // bins at frequencies -1 and 0: b = [1/2, (1 + e^{-j pi/2})/4, 0, (1 + e^{j pi/2})/4]
        assert_abs_diff_eq!(b[1].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1].im, -0.25, epsilon = 1e-15);
        for (x, y) in b.iter().zip(&col) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn windows() {
        let y: Vec<_> = (0..4).map(|i| c(i as f64, 0.0)).collect();
        let win = |n, shifts: &[i64]| cyclic_window(&y, n, &MemorySpec::new(shifts.to_vec()).unwrap()).unwrap();
        assert_eq!(win(2, &[0]), vec![y[2]]);
        assert_eq!(win(0, &[-2, -1, 0, 1, 2]), vec![y[2], y[1], y[0], y[3], y[2]]);
        assert_eq!(win(3, &[-5, -4, -3, -2, -1, 0]), vec![y[0], y[3], y[2], y[1], y[0], y[3]]);
        assert!(cyclic_window(&y, 4, &MemorySpec::new(vec![0]).unwrap()).is_err());
    }

    #[test]
    fn domain_signal_invariants() {
        assert!(DomainSignal::new(vec![c(1.0, 0.0)], Domain::Time(2)).is_err());
        assert!(DomainSignal::time(vec![c(f64::NAN, 0.0)]).is_err());
        let s = DomainSignal::dfts(vec![c(1.0, 0.0); 3]).unwrap();
        assert!(s.expect_time().is_err());
        assert_eq!(s.expect_dfts().unwrap().len(), 3);
    }
}
