use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported: the code construction needs an odd characteristic")]
    EvenCharacteristic,
    #[error("field order {0} exceeds the table limit 2^16")]
    FieldTooLarge(u64),
    #[error("no irreducible polynomial of degree {degree} over GF({p}) was found")]
    NoIrreducible { p: u64, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("index ({row}, {col}) out of range for a {m}x{m} skew-symmetric matrix")]
    IndexOutOfRange { m: usize, row: usize, col: usize },
    #[error("rank 2*{k} exceeds matrix size {m}")]
    RankTooLarge { m: usize, k: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("enumeration of {size} elements exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("unknown format '{0}' (expected plain, json or csv)")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
