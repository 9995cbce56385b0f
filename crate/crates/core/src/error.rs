use thiserror::Error;

/// Errors raised across basis construction, operator algebra, diagonalization
/// and the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid sector {sector}: {reason}")]
    InvalidSector { sector: String, reason: String },

    #[error("mirror quantum numbers require k = (0, 0) on a torus (got {0})")]
    IncompatibleMirror(String),

    #[error("operator `{op}` is not defined on this lattice: {reason}")]
    LatticeMismatch { op: String, reason: String },

    #[error("operator `{op}` does not commute with the sector symmetry: {reason}")]
    SymmetryBroken { op: String, reason: String },

    #[error("operator term references site {site} outside a lattice of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("invalid Pauli term: {0}")]
    InvalidTerm(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver failed in sector {0}")]
    Eigensolver(String),

    #[error("vector norm {0} differs from 1")]
    NotNormalized(f64),

    #[error("density matrix has eigenvalue {0} below the admissible floor")]
    InvalidState(f64),

    #[error("spectral window too small: {0}")]
    WindowTooSmall(String),

    #[error("every level spacing in the window is degenerate")]
    AllDegenerate,

    #[error("observable has no off-diagonal weight: every susceptibility vanishes")]
    DiagonalObservable,

    #[error("broadening must be positive (got {0})")]
    InvalidBroadening(f64),

    #[error("fit rejected: {0}")]
    Fit(String),

    #[error("peak lies on the edge of the grid at J = {0}; extend the grid")]
    PeakAtEdge(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cache entry is invalid: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
