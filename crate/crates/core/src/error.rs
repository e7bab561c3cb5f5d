use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("fields are not a subfield/extension pair")]
    IncompatibleFields,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("Hensel lifting hypothesis fails")]
    HenselFailed,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("singular transform")]
    Singular,
    #[error("pencil is singular")]
    SingularPencil,
    #[error("form is not regular")]
    NotRegular,
    #[error("characteristic-two input must be alternating")]
    NotAlternating,
    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),
    #[error("repeated points")]
    RepeatedPoints,
    #[error("field too large for exhaustive enumeration")]
    FieldTooLarge,
    #[error("candidate set exceeds the cap of {0}")]
    ResourceExhausted(usize),
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
