use crate::padic_core::Q;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("P is a truncated series, not a polynomial")]
    NonPolynomialSeries,
    #[error("modulus is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("Hensel condition fails: v(f(x0)) = {fx}, v(f'(x0)) = {dfx}")]
    HenselFails { fx: String, dfx: String },
    #[error("Witt entry {index} is not integral (valuation {valuation})")]
    NotIntegral { index: usize, valuation: Q },
    #[error("valuation pattern violated: {0}")]
    PatternViolation(String),
    #[error("degree must be positive")]
    DegreeNotPositive,
    #[error("denominator divisible by p: {0}")]
    IntegralityViolation(String),
    #[error("window too short, need hi >= {needed}")]
    WindowTooShort { needed: i64 },
    #[error("series is not overconvergent")]
    NotOverconvergent,
    #[error("division window exhausted")]
    DivisionWindowExhausted,
    #[error("window exhausted")]
    WindowExhausted,
    #[error("ring level {have} too low, need {needed}")]
    LevelTooLow { needed: u32, have: u32 },
    #[error("level {0} required but no Lubin-Tate series is attached")]
    LevelRaiseRequired(u32),
    #[error("expected strictly negative support")]
    PositiveSupport,
    #[error("not a Lubin-Tate series: {0}")]
    NotLubinTate(String),
    #[error("linear step singular at degree {0}")]
    LinearStepSingular(u32),
    #[error("operator is not solvable")]
    NotSolvable,
    #[error("radius parameter must satisfy r <= 0")]
    InvalidRadius,
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::NonPolynomialSeries => "NonPolynomialSeries",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::HenselFails { .. } => "HenselFails",
            Error::NotIntegral { .. } => "NotIntegral",
            Error::PatternViolation(_) => "PatternViolation",
            Error::DegreeNotPositive => "DegreeNotPositive",
            Error::IntegralityViolation(_) => "IntegralityViolation",
            Error::WindowTooShort { .. } => "WindowTooShort",
            Error::NotOverconvergent => "NotOverconvergent",
            Error::DivisionWindowExhausted => "DivisionWindowExhausted",
            Error::WindowExhausted => "WindowExhausted",
            Error::LevelTooLow { .. } => "LevelTooLow",
            Error::LevelRaiseRequired(_) => "LevelRaiseRequired",
            Error::PositiveSupport => "PositiveSupport",
            Error::NotLubinTate(_) => "NotLubinTate",
            Error::LinearStepSingular(_) => "LinearStepSingular",
            Error::NotSolvable => "NotSolvable",
            Error::InvalidRadius => "InvalidRadius",
        }
    }
}
