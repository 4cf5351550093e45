//! Receiver-side digital post-distortion for DFT-s-OFDM links.
//!
//! This crate holds the allocation-only algorithmic core: domain-tagged
//! signals and cyclic operators, Gray-coded QAM, the clamped generalized
//! memory polynomial PA model, per-bin equalization, and the learning
//! machinery (monomial bases, Volterra least squares, polynomial-kernel
//! ridge regression and the memory-polynomial baseline). FFT-based
//! processing, randomness and file formats live in the `dpod-sim` crate.
#![no_std]

extern crate alloc;

pub mod dpod;
pub mod equalizer;
pub mod error;
pub mod gmp;
mod linalg;
pub mod qam;
pub mod signal;

pub use error::{Error, Result};
pub use num_complex::Complex64;
