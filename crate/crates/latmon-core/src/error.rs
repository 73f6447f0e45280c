use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("lattice is not even")]
    NotEven,
    #[error("lattice is not negative definite")]
    NotNegativeDefinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors belong to different lattices")]
    LatticeMismatch,
    #[error("zero vector")]
    ZeroVector,
    #[error("isotropic vector has no reflection")]
    Isotropic,
    #[error("reflection in a non-integral vector")]
    NonIntegralReflection,
    #[error("unknown lattice constructor `{0}`")]
    UnknownConstructor(String),
    #[error("`{0}` names a genus only, not an explicit lattice")]
    GenusOnlyMarker(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid genus symbol: {0}")]
    InvalidSymbol(String),
    #[error("discriminant module is not 2-elementary")]
    NotTwoElementary,
    #[error("discriminant module has {0} elements, above the configured cap")]
    ModuleTooLarge(usize),
    #[error("isometries act on different modules")]
    ModuleMismatch,
    #[error("matrix does not preserve the gram matrix")]
    NotAnIsometry,
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("order exceeds the cap {0}")]
    OrderCapExceeded(u64),
    #[error("isometry has infinite order")]
    InfiniteOrder,
    #[error("isometry is not in O+ (not effective)")]
    NotInOPlus,
    #[error("decomposition into reflections failed")]
    DecompositionFailed,
    #[error("no table row has this fingerprint")]
    OutsideTable,
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),
    #[error("isometry order {order} is not the prime {p}")]
    WrongOrder { order: u64, p: u64 },
    #[error("fixture checksum mismatch: expected {expected}, got {got}")]
    Checksum { expected: String, got: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
