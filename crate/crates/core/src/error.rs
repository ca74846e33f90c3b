use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the kernel can report.
///
/// `code` and `module` give the machine-readable pair used by the CLI error
/// object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("contexts differ")]
    ContextMismatch,
    #[error("{0} is not divisible by pi (broken Frobenius lift)")]
    NonDivisible(String),
    #[error("{0} has negative valuation")]
    NotIntegral(String),
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("jet order {requested} exceeds the maximum {max}")]
    OrderOverflow { requested: usize, max: usize },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("bad reduction at {ell}")]
    BadReduction { ell: u64 },
    #[error("need {needed} coefficients, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("derivative of the polynomial is not a unit at the residue root")]
    NotEtale,
    #[error("starting value is not a root modulo pi")]
    NoResidueRoot,
    #[error("weight {kappa} is congruent to 2 mod {p}-1; no conjugate in [1, p-2]")]
    DegenerateWeight { kappa: i64, p: u64 },
    #[error("weight {kappa} outside [3, {p}]")]
    InvalidWeight { kappa: i64, p: u64 },
    #[error("Bernoulli normalisation has non-unit denominator at p={p}")]
    DenominatorNotUnit { p: u64 },
    #[error("point has valuation {val}, needs >= 1")]
    OutOfDomain { val: i64 },
    #[error("all coefficients vanish at the tracked precision")]
    Inconclusive,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("invalid newform data: {0}")]
    InvalidNewform(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidContext(_) => "InvalidContext",
            Error::ContextMismatch => "ContextMismatch",
            Error::NonDivisible(_) => "NonDivisible",
            Error::NotIntegral(_) => "NotIntegral",
            Error::DivisionByZero => "DivisionByZero",
            Error::OrderOverflow { .. } => "OrderOverflow",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NotAUnit(_) => "NotAUnit",
            Error::BadReduction { .. } => "BadReduction",
            Error::InsufficientCoefficients { .. } => "InsufficientCoefficients",
            Error::NotEtale => "NotEtale",
            Error::NoResidueRoot => "NoResidueRoot",
            Error::DegenerateWeight { .. } => "DegenerateWeight",
            Error::InvalidWeight { .. } => "InvalidWeight",
            Error::DenominatorNotUnit { .. } => "DenominatorNotUnit",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::Inconclusive => "Inconclusive",
            Error::InvalidCharacter(_) => "InvalidCharacter",
            Error::InvalidNewform(_) => "InvalidNewform",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// Kernel module that owns the failing contract.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidContext(_)
            | Error::ContextMismatch
            | Error::NonDivisible(_)
            | Error::NotIntegral(_)
            | Error::DivisionByZero => "padic_core",
            Error::OrderOverflow { .. } | Error::PrecisionExhausted(_) => "jet_series",
            Error::NotAUnit(_) => "gm_character",
            Error::OutOfDomain { .. } | Error::InvalidCurve(_) => "formal_group",
            Error::DegenerateWeight { .. }
            | Error::InvalidWeight { .. }
            | Error::InvalidCharacter(_) => "char_arith",
            Error::BadReduction { .. }
            | Error::InsufficientCoefficients { .. }
            | Error::NotEtale
            | Error::NoResidueRoot
            | Error::DenominatorNotUnit { .. }
            | Error::InvalidNewform(_) => "qexp_tools",
            Error::Inconclusive => "sharp_builder",
            Error::Parse(_) | Error::Io(_) => "cli",
        }
    }
}
