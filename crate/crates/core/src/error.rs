use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is even; only odd primes are supported")]
    EvenModulus(u64),
    #[error("modulus {0} exceeds the supported maximum 2^61-1")]
    ModulusTooLarge(u64),
    #[error("malformed descriptor `{input}`: {reason}")]
    SpecSyntax { input: String, reason: String },
    #[error("element {value} is not a residue modulo {p}")]
    ElementOutOfRange { value: u64, p: u64 },
    #[error("requested {size} distinct elements but the field has only {p}")]
    SizeExceedsField { size: u64, p: u64 },
    #[error("generator {0} is not a unit")]
    GeneratorNotUnit(u64),
    #[error("progression repeats an element before reaching {size} terms")]
    ProgressionCollision { size: u64 },
    #[error("union members overlap; {got} distinct elements instead of {size}")]
    UnionOverlap { size: u64, got: u64 },
    #[error("operands live in different fields (p={left} and p={right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("threshold must be at least 1")]
    InvalidThreshold,
    #[error("set must be nonempty")]
    EmptySet,
    #[error("universe has {0} elements; exact enumeration is capped at 20")]
    UniverseTooLarge(usize),
    #[error("{needed} evaluations exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("statement requires a non-degenerate polynomial")]
    NonDegenerateRequired,
    #[error("statement requires a polynomial not of the form g(h(x)+k(y)+l(z))")]
    FormRequired,
    #[error("size {size} exceeds sqrt(p) for p={p}")]
    SizeAboveSqrtP { size: u64, p: u64 },
    #[error("exponent fit needs at least two distinct positive sizes")]
    InsufficientFitData,
    #[error("plane normal must be nonzero")]
    ZeroNormal,
}

impl Error {
    /// Stable identifier printed by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CompositeModulus(_) => "CompositeModulus",
            Error::EvenModulus(_) => "EvenModulus",
            Error::ModulusTooLarge(_) => "ModulusTooLarge",
            Error::SpecSyntax { .. } => "SpecSyntax",
            Error::ElementOutOfRange { .. } => "ElementOutOfRange",
            Error::SizeExceedsField { .. } => "SizeExceedsField",
            Error::GeneratorNotUnit(_) => "GeneratorNotUnit",
            Error::ProgressionCollision { .. } => "ProgressionCollision",
            Error::UnionOverlap { .. } => "UnionOverlap",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::InvalidThreshold => "InvalidThreshold",
            Error::EmptySet => "EmptySet",
            Error::UniverseTooLarge(_) => "UniverseTooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NonDegenerateRequired => "NonDegenerateRequired",
            Error::FormRequired => "FormRequired",
            Error::SizeAboveSqrtP { .. } => "SizeAboveSqrtP",
            Error::InsufficientFitData => "InsufficientFitData",
            Error::ZeroNormal => "ZeroNormal",
        }
    }

    /// True for errors caused by a computation limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::UniverseTooLarge(_) | Error::BudgetExceeded { .. } | Error::SizeAboveSqrtP { .. })
    }

    pub(crate) fn syntax(input: &str, reason: impl Into<String>) -> Self {
        Error::SpecSyntax { input: input.to_string(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
