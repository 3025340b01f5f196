use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Numerical preconditions map to dedicated variants
/// so callers (and the fuzz harness) can distinguish "singular configuration"
/// from genuine bugs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("wavefunction not padded: boundary amplitude {amplitude:.3e} exceeds {limit:.0e}")]
    PaddingViolation { amplitude: f64, limit: f64 },

    #[error("invalid gaussian parameters: {0}")]
    InvalidGaussian(String),

    #[error("separation must be nonnegative, got {0}")]
    NegativeSeparation(f64),

    #[error("beam splitter norm vanishes (complete destructive interference)")]
    DegenerateSplit,

    #[error("householder reflection singular: 1 + <target|phi> ~ 0")]
    SingularHouseholder,

    #[error("measurement outcome has vanishing probability")]
    NullOutcome,

    #[error("fringe normalization n(theta) vanishes")]
    OverlapSingularity,

    #[error("degenerate fringe pattern: f_max + f_min ~ 0")]
    DegenerateFringe,

    #[error("detector modulus exceeds 1: max |D| = {0}")]
    DetectorTooLarge(f64),

    #[error("states are indistinguishable: |<phi|T_a phi>| ~ 1")]
    IndistinguishableStates,

    #[error("modular momentum expectation vanishes; phase undefined")]
    UndefinedPhase,

    #[error("branches overlap too much for this relation: |<phi|T_a phi>| = {0:.3e}")]
    OverlapTooLarge(f64),

    #[error("detector varies too fast over the packet width: variation {0:.3} > 0.05")]
    DetectorTooSharp(f64),

    #[error("invalid emission setup: {0}")]
    InvalidEmission(String),

    #[error("time step {dt:.3e} too coarse for fastest mode (need <= {max_dt:.3e})")]
    StiffnessError { dt: f64, max_dt: f64 },

    #[error("k-window too narrow: detector-mode tail mass {0:.3e} exceeds 1e-8")]
    WindowTooNarrow(f64),

    #[error("invalid lens setup: {0}")]
    InvalidLens(String),

    #[error("config error at {path}:{line}: {msg}")]
    Config {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code per the CLI contract: configuration / usage
    /// problems exit with 2 (inequality violations are signalled by the
    /// subcommands themselves with exit code 1, not through errors).
    pub fn exit_code(&self) -> i32 {
        2
    }
}
