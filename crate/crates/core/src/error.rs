use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("columns are not orthonormal (deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unitary for party {party} has dimension {found}, expected {expected}")]
    PartyDimensionMismatch {
        party: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix for party {party} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { party: usize, deviation: f64 },

    #[error("invalid entries: {0}")]
    InvalidEntries(String),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid party set: {0}")]
    InvalidPartySet(String),

    #[error("expected a two-party density matrix, got {parties} parties")]
    NotBipartite { parties: usize },

    #[error("expected a three-party state, got {parties} parties")]
    NotTripartite { parties: usize },

    #[error("fingerprints are not comparable: {0}")]
    SplitMismatch(String),

    #[error("reduced states differ (residual {residual:.3e})")]
    ReducedMismatch { residual: f64 },

    #[error("witness does not map the reduced state (residual {residual:.3e})")]
    WitnessMismatch { residual: f64 },

    #[error("reconstructed unitary reaches fidelity {fidelity} only")]
    ReconstructionFailed { fidelity: f64 },

    #[error("Hilbert space dimension {dim} exceeds the search limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::ReconstructionFailed { .. }
        )
    }
}
