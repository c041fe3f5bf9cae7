use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moduli are not pairwise coprime: gcd({0}, {1}) > 1")]
    NonCoprimeModuli(String, String),

    #[error("modulus must be odd, got {0}")]
    EvenModulus(u64),

    #[error("prime power {q} exceeds the enumeration cap {cap}; only factored-form reasoning is supported above the cap")]
    EnumerationCap { q: u64, cap: u64 },

    #[error("scan of {classes} classes exceeds the cap {cap}; shard the range across several invocations")]
    ScanCap { classes: String, cap: u64 },

    #[error("sieve limit {limit} exceeds the memory cap {cap}")]
    SieveCap { limit: u64, cap: u64 },

    #[error("value {value} exceeds the cap {cap}")]
    ValueCap { value: u64, cap: u64 },

    #[error("{0} does not fit in 64 bits")]
    Overflow(&'static str),

    #[error("{0}")]
    InvalidInput(String),

    #[error("cannot parse factored modulus: {0}")]
    ModulusParse(String),

    #[error("malformed value-set table cache: {0}")]
    CacheFormat(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
