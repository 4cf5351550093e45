use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::memory::MemorySpec;
use crate::error::{Error, Result};
use crate::signal::{cyclic_window_into, write_xi, write_xi_rot};

/// Real-valued regression data: one row per real/imaginary component of each
/// complex training sample.
///
/// Rows come in pairs: `(xi(y_n), Re(x_n))` then `(xi_rot(y_n), Im(x_n))`,
/// where `y_n` is the cyclic window of the received signal around `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    memory: MemorySpec,
    dim: usize,
    inputs: Vec<f64>,
    targets: Vec<f64>,
}

impl TrainingSet {
    /// Builds a set from explicit rows (row-major `inputs`).
    pub fn from_rows(memory: MemorySpec, inputs: Vec<f64>, targets: Vec<f64>) -> Result<Self> {
        let dim = memory.real_dim();
        if inputs.len() != targets.len() * dim {
            return Err(Error::LengthMismatch {
                expected: targets.len() * dim,
                actual: inputs.len(),
            });
        }
        if inputs.iter().chain(&targets).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("training data"));
        }
        Ok(Self {
            memory,
            dim,
            inputs,
            targets,
        })
    }

    pub fn memory(&self) -> &MemorySpec {
        &self.memory
    }

    /// Input dimension `2L`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of real rows.
    pub fn rows(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn inputs(&self) -> &[f64] {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Concatenates two sets built with the same memory spec.
    pub fn extend(&mut self, other: &TrainingSet) -> Result<()> {
        if other.memory != self.memory {
            return Err(Error::InvalidMemory("cannot merge training sets with different memory"));
        }
        self.inputs.extend_from_slice(&other.inputs);
        self.targets.extend_from_slice(&other.targets);
        Ok(())
    }

    /// Keeps at most `cap` rows, picked at uniform stride `floor(i * rows / cap)`.
    pub fn subsample(&self, cap: usize) -> TrainingSet {
        let rows = self.rows();
        if cap == 0 || rows <= cap {
            return self.clone();
        }
        let mut inputs = Vec::with_capacity(cap * self.dim);
        let mut targets = Vec::with_capacity(cap);
        for i in 0..cap {
            let r = i * rows / cap;
            inputs.extend_from_slice(self.input(r));
            targets.push(self.targets[r]);
        }
        TrainingSet {
            memory: self.memory.clone(),
            dim: self.dim,
            inputs,
            targets,
        }
    }
}

/// Pairs each clean sample with the cyclic window of the received signal
/// around it, emitting two real rows per complex sample.
pub fn build_training_set(clean: &[Complex64], received: &[Complex64], memory: &MemorySpec) -> Result<TrainingSet> {
    if clean.len() != received.len() {
        return Err(Error::LengthMismatch {
            expected: clean.len(),
            actual: received.len(),
        });
    }
    if clean.is_empty() {
        return Err(Error::Empty);
    }
    let dim = memory.real_dim();
    let n = clean.len();
    let mut inputs = vec![0.0; 2 * n * dim];
    let mut targets = Vec::with_capacity(2 * n);
    let mut window = vec![Complex64::new(0.0, 0.0); memory.len()];
    for (i, x) in clean.iter().enumerate() {
        cyclic_window_into(received, i, memory, &mut window);
        let base = 2 * i * dim;
        write_xi(&window, &mut inputs[base..base + dim]);
        write_xi_rot(&window, &mut inputs[base + dim..base + 2 * dim]);
        targets.push(x.re);
        targets.push(x.im);
    }
    TrainingSet::from_rows(memory.clone(), inputs, targets)
}
