use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument sits on a pole (Gamma function, vanishing Pochhammer denominator).
    Pole(&'static str),
    /// Argument outside the documented domain.
    Domain(&'static str),
    /// Adaptive quadrature ran out of subdivisions.
    Convergence { subdivisions: usize, estimate: f64, error: f64 },
    /// Integrand is not integrable at the origin of a half-line.
    Singular,
    /// Integrand returned NaN or infinity.
    NonFinite(f64),
    /// A coupling b_n vanished where it must be inverted.
    DivisionByZero { index: usize },
    /// Sequence too short for the requested section.
    Size { needed: usize, available: usize },
    /// A computed squared modulus came out negative or complex.
    Sign { index: usize, value: f64 },
    /// Input describes the zero vector or an otherwise degenerate state.
    Degenerate(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole(w) => write!(f, "pole: {w}"),
            Error::Domain(w) => write!(f, "domain error: {w}"),
            Error::Convergence { subdivisions, estimate, error } => write!(
                f,
                "quadrature did not converge after {subdivisions} subdivisions \
                 (estimate {estimate:e}, error {error:e})"
            ),
            Error::Singular => write!(f, "integrand is not integrable at the origin"),
            Error::NonFinite(x) => write!(f, "integrand is not finite at {x}"),
            Error::DivisionByZero { index } => write!(f, "coupling b_{index} vanishes"),
            Error::Size { needed, available } => {
                write!(f, "need {needed} coefficients, have {available}")
            }
            Error::Sign { index, value } => {
                write!(f, "squared modulus at index {index} is invalid ({value:e})")
            }
            Error::Degenerate(w) => write!(f, "degenerate input: {w}"),
        }
    }
}

impl core::error::Error for Error {}
