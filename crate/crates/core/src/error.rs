use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigendecomposition did not converge after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("singular linear system")]
    Singular,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("integration unstable at t = {t} ps (trace drift {drift:e}); use a smaller time step")]
    StepInstability { t: f64, drift: f64 },

    #[error(
        "positivity violated at t = {t} ps: minimum eigenvalue {min_eigenvalue:e} below {tolerance:e}"
    )]
    PositivityViolation {
        t: f64,
        min_eigenvalue: f64,
        tolerance: f64,
    },

    #[error("quadrature grid too coarse: n and 2n estimates differ by {difference:e} (limit {limit:e})")]
    GridTooCoarse { difference: f64, limit: f64 },

    #[error("objective returned NaN at {point:?}")]
    NanObjective { point: Vec<f64> },

    #[error("no bracketing interval: {0}")]
    NoBracket(String),

    #[error("validity condition not met: ratio {ratio:.3} below threshold {threshold}")]
    Validity { ratio: f64, threshold: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("data row {row}: {message}")]
    Data { row: usize, message: String },

    #[error("{0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
