use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series did not converge within {max_terms} terms (a={a}, b={b}, x={x})")]
    NonConvergence {
        a: f64,
        b: f64,
        x: f64,
        max_terms: usize,
    },
    #[error("pole encountered: {0}")]
    Pole(String),
    #[error("argument outside the safe evaluation range: {0}")]
    Overflow(String),
    #[error("integrand is singular on the path: solution vanishes near x={at}")]
    SingularIntegrand { at: f64 },
    #[error("quadrature on [{a}, {b}] failed to reach tolerance within the subdivision budget")]
    QuadFailure { a: f64, b: f64 },
    #[error("Wronskian of the basis is {value}, expected 1")]
    WronskianNotUnit { value: f64 },
    #[error("Wronskian vanishes at x={at} (|W|={value:e})")]
    WronskianZero { at: f64, value: f64 },
    #[error("ODE integration produced a non-finite value at x={at}")]
    StepFailure { at: f64 },
    #[error("endpoint limit not resolved: {0}")]
    LimitNotResolved(String),
    #[error("division by zero at x={at}")]
    DivisionByZero { at: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
