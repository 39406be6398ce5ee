use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial of degree {degree} could not be factored by any registered strategy")]
    Unfactorable { degree: usize },

    #[error("torsion subgroup has {size} elements, above the cap of {cap}")]
    TorsionTooLarge { size: u128, cap: u64 },

    #[error("modular orbit exceeded the budget of {cap} states (modulus {modulus})")]
    StateBudgetExceeded { modulus: u64, cap: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
