use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or scenario field violates its documented range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Scenario file could not be parsed or contains unknown keys.
    #[error("config error: {0}")]
    Config(String),

    #[error("quadrature did not converge: estimate {estimate:.6e}, error {error:.3e} after {subdivisions} subdivisions")]
    Quadrature { estimate: f64, error: f64, subdivisions: usize },

    #[error("series did not converge within z_max = {z_max}: last term {last_term:.3e}, rounding bound {rounding:.3e}")]
    SeriesNonConvergence { z_max: usize, last_term: f64, rounding: f64 },

    /// Dense linear algebra failure (singular system) in the queue solver.
    #[error("singular matrix: {0}")]
    Singular(&'static str),

    /// A computed result failed its self-check.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("queue is unstable: arrival rate {alpha} >= service rate {service_rate}")]
    Unstable { alpha: f64, service_rate: f64 },

    /// Two tables or manifests that should share a layout do not.
    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                _ => unreachable!("checked by is_io_error"),
            }
        } else {
            Error::Schema(e.to_string())
        }
    }
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::SeriesNonConvergence { .. }
                | Error::Singular(_)
                | Error::Verification(_)
                | Error::Unstable { .. }
        )
    }
}
