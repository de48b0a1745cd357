use thiserror::Error;

/// Errors produced by the numerical engines and the file/config front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible bipartition: dimension {dim} is not {d_a} x {d_b}")]
    IncompatibleBipartition { dim: usize, d_a: usize, d_b: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("composite dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("pole: x = {x} lies within {guard:e} of the pole at x = {pole}")]
    Pole { x: f64, pole: f64, guard: f64 },

    #[error("series divergence: {0}")]
    SeriesDivergence(String),

    #[error("root not bracketed: no sign change of G_- in E in [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("ground-state reconstruction inconsistent: {0}")]
    ReconstructionInconsistent(String),

    #[error("resonance required: detuning is {0}, the Bloch-Siegert state needs 0")]
    ResonanceRequired(f64),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("ledger inconsistent: {0}")]
    LedgerInconsistent(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix too large: {0}")]
    MatrixTooLarge(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag, used as the CSV status column.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IncompatibleBipartition { .. } => "incompatible-bipartition",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::InvalidState(_) => "invalid-state",
            Error::NotHermitian(_) => "not-hermitian",
            Error::DimensionCap { .. } => "dimension-cap",
            Error::Pole { .. } => "pole",
            Error::SeriesDivergence(_) => "series-divergence",
            Error::RootNotBracketed { .. } => "root-not-bracketed",
            Error::ReconstructionInconsistent(_) => "reconstruction-inconsistent",
            Error::ResonanceRequired(_) => "resonance-required",
            Error::OracleMismatch(_) => "oracle-mismatch",
            Error::LedgerInconsistent(_) => "ledger-inconsistent",
            Error::InvalidParams(_) => "invalid-params",
            Error::MatrixTooLarge(_) => "matrix-too-large",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }

    /// Whether the error comes from user input rather than a numerical solver.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::IncompatibleBipartition { .. }
                | Error::DimensionMismatch { .. }
                | Error::NotHermitian(_)
                | Error::ResonanceRequired(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
