use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid oscillator spec: {0}")]
    InvalidSpec(String),

    #[error("dense solve budget exceeded: {points} grid points > budget {budget}")]
    DenseBudget { points: usize, budget: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("no trusted modes (J_ok = 0): {0}")]
    NoTrustedModes(String),

    #[error("object belongs to a different spectral basis")]
    BasisMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("threshold {threshold} lies beyond the trusted spectrum (largest trusted eigenvalue {max})")]
    BeyondTrustedSpectrum { threshold: f64, max: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Cache(#[from] CacheError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Failures while decoding a basis cache file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("bad magic {0:?}, expected \"AKLB\"")]
    BadMagic([u8; 4]),

    #[error("unsupported cache version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated cache file: need {needed} bytes, found {found}")]
    Truncated { needed: usize, found: usize },

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error("malformed cache file: {0}")]
    Malformed(String),
}
