use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid array geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid position: {0}")]
    InvalidPosition(String),

    #[error("antenna index {index} out of range 1..={num_antennas}")]
    AntennaIndex { index: usize, num_antennas: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("beam threshold of {phi_db} dB lies below the first lobe of the gain function")]
    ThresholdOutOfLobe { phi_db: f64 },

    #[error("power budget violated: used {used:.6e} W, budget {budget:.6e} W")]
    PowerBudget { used: f64, budget: f64 },

    #[error("channel vector has zero norm")]
    ZeroChannel,

    #[error("empty user list")]
    NoUsers,

    #[error("vector length {got} does not match array size {expected}")]
    Dimension { expected: usize, got: usize },

    #[error(
        "convex subproblem did not converge at outer iteration {outer_iteration}: \
         stationarity {stationarity:.3e} after {inner_iterations} steps (objective {objective:.6e})"
    )]
    SubproblemNotConverged {
        outer_iteration: usize,
        inner_iterations: usize,
        stationarity: f64,
        objective: f64,
    },
}
