use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponent overflow at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("division by zero {0}")]
    DivisionByZero(&'static str),
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("evaluation at a pole")]
    Pole,
    #[error("q vanishes identically (harmonic weight)")]
    HarmonicWeight,
    #[error("mismatched divisibility base: {0} vs {1}")]
    MismatchedBase(String, String),
    #[error("hint a = {0} is not a root: q(-a, 1) != 0")]
    NotARoot(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("argument outside the supported sector: {0}")]
    OutsideSector(String),
    #[error("derivative order ({0}, {1}) not supported")]
    UnsupportedOrder(u32, u32),
    #[error("quadrature did not converge after {levels} levels (estimate {estimate:e}, error {error:e})")]
    Quadrature { levels: u32, estimate: f64, error: f64 },
    #[error("conditioning failure: {0}")]
    Conditioning(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Failures of the numerical machinery rather than of the caller's input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::Conditioning(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
