use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;

use super::memory::MemorySpec;
use crate::error::{Error, Result};
use crate::signal::{cyclic_window_into, write_xi, write_xi_rot};

/// A real-valued odd function of the embedded window.
pub trait RealPredictor {
    fn memory(&self) -> &MemorySpec;

    /// Scratch needed by [`RealPredictor::predict_real_with`].
    fn scratch_len(&self) -> usize {
        0
    }

    fn predict_real_with(&self, y: &[f64], scratch: &mut [f64]) -> f64;

    fn predict_real(&self, y: &[f64]) -> f64 {
        let mut scratch = vec![0.0; self.scratch_len()];
        self.predict_real_with(y, &mut scratch)
    }
}

/// Maps a complex window to one compensated sample.
pub trait Compensator {
    fn memory(&self) -> &MemorySpec;

    fn predict_window(&self, window: &[Complex64]) -> Complex64;

    /// Compensates samples `range` of `received`, writing into `out`.
    fn compensate_range(&self, received: &[Complex64], range: Range<usize>, out: &mut [Complex64]) {
        let mut window = vec![Complex64::new(0.0, 0.0); self.memory().len()];
        for (o, n) in out.iter_mut().zip(range) {
            cyclic_window_into(received, n, self.memory(), &mut window);
            *o = self.predict_window(&window);
        }
    }
}

/// `f(xi(y)) + j f(xi_rot(y))`: the rotation-equivariant complex map built
/// from the odd real predictor `f`.
pub fn predict_complex<P: RealPredictor + ?Sized>(model: &P, window: &[Complex64]) -> Result<Complex64> {
    if window.len() != model.memory().len() {
        return Err(Error::LengthMismatch {
            expected: model.memory().len(),
            actual: window.len(),
        });
    }
    let mut buf = PredictBuffers::new(model);
    Ok(buf.predict(model, window))
}

struct PredictBuffers {
    y: Vec<f64>,
    scratch: Vec<f64>,
}

impl PredictBuffers {
    fn new<P: RealPredictor + ?Sized>(model: &P) -> Self {
        Self {
            y: vec![0.0; model.memory().real_dim()],
            scratch: vec![0.0; model.scratch_len()],
        }
    }

    #[inline]
    fn predict<P: RealPredictor + ?Sized>(&mut self, model: &P, window: &[Complex64]) -> Complex64 {
        write_xi(window, &mut self.y);
        let re = model.predict_real_with(&self.y, &mut self.scratch);
        write_xi_rot(window, &mut self.y);
        let im = model.predict_real_with(&self.y, &mut self.scratch);
        Complex64::new(re, im)
    }
}

macro_rules! real_compensator {
    ($ty:ty) => {
        impl Compensator for $ty {
            fn memory(&self) -> &MemorySpec {
                RealPredictor::memory(self)
            }

            fn predict_window(&self, window: &[Complex64]) -> Complex64 {
                PredictBuffers::new(self).predict(self, window)
            }

            fn compensate_range(&self, received: &[Complex64], range: Range<usize>, out: &mut [Complex64]) {
                let memory = RealPredictor::memory(self);
                let mut window = vec![Complex64::new(0.0, 0.0); memory.len()];
                let mut buf = PredictBuffers::new(self);
                for (o, n) in out.iter_mut().zip(range) {
                    cyclic_window_into(received, n, memory, &mut window);
                    *o = buf.predict(self, &window);
                }
            }
        }
    };
}

real_compensator!(super::volterra::VolterraModel);
real_compensator!(super::kernel::KernelModel);

/// Applies the compensator to every sample: `out[n] = g(window(received, n))`.
pub fn compensate<C: Compensator + ?Sized>(model: &C, received: &[Complex64]) -> Result<Vec<Complex64>> {
    if received.is_empty() {
        return Err(Error::Empty);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); received.len()];
    model.compensate_range(received, 0..received.len(), &mut out);
    Ok(out)
}
