use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("coset level {coset} exceeds point level {point}")]
    CosetTooFine { coset: u32, point: u32 },

    #[error("residue {residue} out of range for level {level}")]
    ResidueOutOfRange { residue: u64, level: u32 },

    #[error("digit {value} at position {position} is not a valid base-2 digit")]
    InvalidDigit { position: usize, value: u8 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("level {level} exceeds the supported cap {cap}")]
    LevelCap { level: u32, cap: u32 },

    #[error("sample count {actual} does not match 2^{level} = {expected}")]
    SampleCount {
        level: u32,
        expected: usize,
        actual: usize,
    },

    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("refinement target {target} is coarser than the source level {from}")]
    CoarserThanSource { from: u32, target: u32 },

    #[error("projection level {requested} exceeds function level {level}")]
    ProjectionTooFine { requested: u32, level: u32 },

    #[error("block index {requested} out of range for level {level}")]
    BlockOutOfRange { requested: u32, level: u32 },

    #[error("exponent {0} is not in [1, inf]")]
    InvalidExponent(f64),

    #[error("invalid norm specification: {0}")]
    InvalidNormSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid interpolation spec: {0}")]
    InvalidInterpolationSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
