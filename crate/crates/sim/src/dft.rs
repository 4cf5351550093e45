//! Unitary DFT with centered bin ordering:
//! `X[k] = N^{-1/2} sum_n x[n] exp(-j 2 pi (k - floor(N/2)) n / N)`.
//!
//! Under this normalization the convolution theorem reads
//! `a (*) b = idft(sqrt(N) dft(a) . dft(b))`.

use std::cell::RefCell;

use dpod_core::{Complex64, Error, Result};
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fft = if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

pub fn dft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut buf = x.to_vec();
    transform(&mut buf, false);
    // natural bin m holds frequency m; centered index k holds k - n/2
    buf.rotate_right(n / 2);
    let s = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= s);
    Ok(buf)
}

pub fn idft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut buf = spectrum.to_vec();
    buf.rotate_left(n / 2);
    transform(&mut buf, true);
    let s = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= s);
    Ok(buf)
}

/// Fast path for cyclic convolution; agrees with the direct sum in
/// [`dpod_core::signal::cyclic_convolve`].
pub fn cyclic_convolve_fft(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let fa = dft(a)?;
    let fb = dft(b)?;
    let s = (a.len() as f64).sqrt();
    let prod: Vec<_> = fa.iter().zip(&fb).map(|(x, y)| x * y * s).collect();
    idft(&prod)
}
