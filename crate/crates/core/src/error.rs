use thiserror::Error;

/// Errors reported by the `lissphere` crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frequencies must be positive, got m = ({m1}, {m2})")]
    ZeroFrequency { m1: usize, m2: usize },

    #[error("m2 must be even for node sets and interpolation, got m2 = {0}")]
    OddM2(usize),

    #[error("index ({i1}, {i2}) is not in {set} for m = ({m1}, {m2})")]
    IndexNotInSet {
        i1: i64,
        i2: i64,
        m1: usize,
        m2: usize,
        set: &'static str,
    },

    #[error("spectral index ({g1}, {g2}) is not in the selected spectral set")]
    SpectralIndexNotInSet { g1: i64, g2: i64 },

    #[error("{what} = {value} out of range [0, {bound})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        bound: i64,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("frequency mismatch: ({0}, {1}) vs ({2}, {3})")]
    FrequencyMismatch(usize, usize, usize, usize),

    #[error("non-finite argument: {0}")]
    NonFinite(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
