//! Link-level simulation of DFT-s-OFDM uplink through a nonlinear PA with
//! receiver-side post-distortion. FFT-based signal paths, channels, the
//! receiver, configuration, sweeps and file formats; the algorithms
//! themselves live in `dpod-core`.

pub mod channel;
pub mod config;
pub mod dft;
pub mod error;
pub mod model_io;
pub mod pa;
pub mod receiver;
pub mod selftest;
pub mod sim;
pub mod waveform;

pub use error::{SimError, SimResult};
