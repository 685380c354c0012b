use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The variants are grouped by what the caller did wrong: malformed or
/// inconsistent input, a curve that is not smooth, a Massey product that is
/// not defined, or a search that ran out of budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial is not homogeneous (found terms of degree {first} and {second})")]
    NotHomogeneous { first: u32, second: u32 },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("curve degree {0} is below 3")]
    DegreeTooLow(u32),

    #[error("curve is singular: the partial derivatives do not form a regular sequence")]
    SingularCurve,

    #[error("distinguished element lies in the ideal; the quotient is not spanned by it")]
    SpecialInIdeal,

    #[error("cup product {pair} does not vanish; the Massey product is undefined")]
    CupObstruction { pair: &'static str },

    #[error("witness for {which} does not satisfy its defining identity")]
    WitnessIdentity { which: &'static str },

    #[error("no isotropic triple found after {attempts} attempts")]
    BudgetExhausted { attempts: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
