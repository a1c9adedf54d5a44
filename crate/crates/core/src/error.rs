use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A single transmit antenna leaves no null space for artificial noise.
    #[error("no null space: artificial noise needs at least two antennas")]
    NoNullSpace,

    /// The QoS target needs more signal power than the total budget.
    #[error("infeasible: required signal power {required:e} W exceeds budget {available:e} W")]
    Infeasible { required: f64, available: f64 },

    #[error("could not place {antennas} antennas with separation {min_distance} in a {region_size} square after {attempts} attempts")]
    PackingInfeasible {
        antennas: usize,
        region_size: f64,
        min_distance: f64,
        attempts: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
