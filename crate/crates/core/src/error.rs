use thiserror::Error;

#[derive(Debug, Error)]
pub enum HallError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("objects live over different quivers or moduli")]
    ContextMismatch,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("quiver has an oriented cycle; derived computations need a hereditary finite-dimensional path algebra")]
    NotAcyclic,

    #[error("malformed morphism: {0}")]
    MalformedMorphism(String),

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("enumeration cap exceeded while {what}: {needed} candidates > cap {cap}")]
    CapExceeded { what: String, needed: String, cap: u64 },

    #[error("out of universe: {0}")]
    OutOfUniverse(String),

    #[error("unknown class id {0}")]
    UnknownClass(usize),

    #[error("invalid locally finite data: {0}")]
    InvalidLf(String),

    #[error("function lives on a different base than the map expects")]
    BaseMismatch,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HallError>;

impl HallError {
    pub fn cap(what: impl Into<String>, needed: impl ToString, cap: u64) -> Self {
        HallError::CapExceeded {
            what: what.into(),
            needed: needed.to_string(),
            cap,
        }
    }
}
