use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a polynomial in beta")]
    NotBetaPolynomial,
    #[error("not expressible in delta")]
    NotDeltaPolynomial,
    #[error("not a polynomial in alpha")]
    NotAlphaPolynomial,
    #[error("degree bound violated: degree {found} exceeds {bound}")]
    DegreeBound { found: i64, bound: i64 },
    #[error("AtopCh violated: {0}")]
    AtopCh(String),
    #[error("theta basis degenerate for n = {0}")]
    ThetaDegenerate(usize),
    #[error("counting identity violated: {0}")]
    CountingIdentity(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("component type {found} differs from face type {expected}")]
    ComponentType { found: String, expected: String },
    #[error("independent routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
