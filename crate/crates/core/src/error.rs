use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),
    #[error("reducible modulus")]
    ReducibleModulus,
    #[error("no default modulus for q = {0}")]
    NoDefaultModulus(u64),
    #[error("character undefined at zero")]
    CharacterUndefinedAtZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension limit: {dim} exceeds {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("space mismatch")]
    SpaceMismatch,
    #[error("not symplectic")]
    NotSymplectic,
    #[error("not a theta form: {0}")]
    NotAThetaForm(String),
    #[error("degenerate transvection")]
    DegenerateTransvection,
    #[error("group too large: order {order} exceeds cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("not in centralizer")]
    NotInCentralizer,
    #[error("W not g-invariant")]
    WNotInvariant,
    #[error("singular input")]
    SingularInput,
    #[error("not a Lagrangian frame: {0}")]
    NotLagrangian(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
