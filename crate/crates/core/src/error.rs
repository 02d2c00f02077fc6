use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),

    #[error("term {0} has no linear forms")]
    EmptyTerm(usize),

    #[error("cannot mix numeric and symbolic-k coefficients in one sum")]
    MixedCoefficients,

    #[error("normalization with coefficients depending on k is not supported; specialize k first")]
    SymbolicNormalization,

    #[error("linear form `{0}` has no non-constant part")]
    ConstantForm(String),

    #[error("linear form vanishes identically: {0}")]
    DegenerateForm(String),

    #[error("unknown divisor `{0}`")]
    UnknownDivisor(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("datum has no local fiber points")]
    EmptyPointList,

    #[error("invalid datum: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("stratum {0} has an Euler characteristic depending on k; specialize k first")]
    SymbolicChi(String),

    #[error("stratum {0} carries only a leading term in k; an exact value is required")]
    LeadingOnlyChi(String),

    #[error("candidate `{form}` has pole order {order}, expected 1")]
    NotSimplePole { form: String, order: u32 },

    #[error("missing ample data: {0}")]
    MissingAmple(String),

    #[error("datum is not log very-generic: {0}")]
    NotLogVeryGeneric(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("value too large to enumerate: {0}")]
    TooLarge(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
