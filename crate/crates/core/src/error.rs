use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different cyclotomic fields (orders {0} and {1}); lift first")]
    OrderMismatch(u32, u32),

    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),

    #[error("order {from} does not divide target order {to}")]
    NonDivisibleOrder { from: u32, to: u32 },

    #[error("index {k} is not a unit modulo {n}")]
    NotAUnit { k: u64, n: u64 },

    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u64, got: u64 },

    #[error("divisibility precondition violated: {0}")]
    Divisibility(String),

    #[error("operation requires a non-trivial character")]
    TrivialCharacter,

    #[error("operation requires an odd primitive character")]
    NotOddPrimitive,

    #[error("evaluation budget exhausted; achieved error bound {achieved}")]
    BudgetExhausted { achieved: String },

    #[error("quadrature failed to reach the error target; achieved {achieved}")]
    QuadratureTarget { achieved: String },

    #[error("no sign/conjugation convention matched: candidates {candidates}")]
    ConventionMismatch { candidates: String },

    #[error("insufficient precision for relation search: need at least {needed} digits, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },

    #[error("invalid relation query: {0}")]
    BadRelationQuery(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
