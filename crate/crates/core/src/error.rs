use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("steady-state system is singular (condition estimate {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("time evolution did not settle: relative drift {relative_change:.3e} over the last 10% of the run")]
    NonConvergence { relative_change: f64 },

    #[error(
        "resonant singularity at omega = {omega:.6e} rad/s (condition estimate {condition:.3e})"
    )]
    ResonantSingularity { omega: f64, condition: f64 },

    #[error("Gauss-Legendre quadrature not converged at order {order} (relative change {relative_change:.3e})")]
    QuadratureNotConverged { order: usize, relative_change: f64 },

    #[error("cannot convert non-positive value {0} to decibels")]
    NonPositive(f64),

    #[error("inseparability stays >= 1 over the whole bracket (best {best:.6})")]
    NoMinimum { best: f64 },

    #[error("non-finite intermediate result in {0}")]
    NonFinite(&'static str),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("config: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
