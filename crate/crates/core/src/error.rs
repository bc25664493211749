use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),

    #[error("n_{index}*beta_{index} has no bounded representation in the earlier generators")]
    NoRepresentation { index: usize },

    #[error("random generation failed after {attempts} attempts (g={g}, bound={bound})")]
    GenerationFailed { g: usize, bound: u64, attempts: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("denominator factor (1 - L^-{a} T^{b}) has no unit constant term")]
    NonUnitDenominator { a: i64, b: u64 },

    #[error("evaluation hits a pole of a denominator factor")]
    PoleHit,

    #[error("characteristic {q} is not usable: {reason}")]
    BadCharacteristic { q: u64, reason: String },

    #[error("enumeration exceeded the budget of {budget} field operations")]
    BudgetExceeded { budget: u64 },

    #[error("residue mismatch at pole {pole}: table {table}, symbolic {symbolic}")]
    ResidueMismatch {
        pole: String,
        table: String,
        symbolic: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
