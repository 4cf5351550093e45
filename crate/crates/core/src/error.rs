use thiserror::Error;

/// Errors raised by the signal, PA and compensation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    Empty,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid subcarrier layout: lower guard {lower} + data {data} + upper guard {upper} != fft size {fft}")]
    SubcarrierLayout {
        fft: usize,
        data: usize,
        lower: usize,
        upper: usize,
    },
    #[error("domain mismatch: expected {expected}, got {actual}")]
    DomainMismatch {
        expected: &'static str,
        actual: &'static str,
    },
    #[error("invalid memory spec: {0}")]
    InvalidMemory(&'static str),
    #[error("invalid degree: {0} (must be a positive odd integer)")]
    InvalidDegree(usize),
    #[error("unsupported QAM order {0}")]
    UnsupportedQamOrder(usize),
    #[error("bit block length {len} is not a multiple of {bits_per_symbol}")]
    BitLength { len: usize, bits_per_symbol: usize },
    #[error("signal has zero power")]
    ZeroPower,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("channel response magnitude {magnitude:e} at bin {bin} is below the zero-forcing guard")]
    SingularChannel { bin: usize, magnitude: f64 },
    #[error("coefficient ({0}) lies outside the declared index sets")]
    CoefficientOutsideIndexSet(&'static str),
    #[error("least-squares system is rank deficient; use a positive ridge")]
    RankDeficient,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("constellation table: {0}")]
    ConstellationTable(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
