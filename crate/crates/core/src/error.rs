use thiserror::Error;

/// Which precondition of [`crate::procrustes_fit`] failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitPrecondition {
    LengthMismatch,
    TooFewPoints,
    DimensionMismatch,
    AffinelyDependent,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty body: centers need an enclosing ball of radius {radius} > 1")]
    EmptyBody { radius: f64 },
    #[error("expression depth {depth} exceeds the bound {bound}")]
    TooDeep { depth: usize, bound: usize },
    #[error("rotation matrix is not orthogonal (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("infeasible: the ball intersection is empty")]
    Infeasible,
    #[error("support solver did not certify tolerance {tol:e} (gap {gap:e})")]
    NoConvergence { tol: f64, gap: f64 },
    #[error("procrustes precondition failed: {0:?}")]
    Fit(FitPrecondition),
    #[error("insufficient resolution: angular step {step} >= pi/2 at sample {index}")]
    InsufficientResolution { index: usize, step: f64 },
    #[error("curve hits origin at sample {index}")]
    CurveHitsOrigin { index: usize },
    #[error("resolution exhausted after {samples} samples")]
    ResolutionExhausted { samples: usize },
    #[error("empty reconstruction: probe balls have empty intersection")]
    EmptyReconstruction,
    #[error("empty raster at cell {cell}")]
    EmptyRaster { cell: f64 },
    #[error("raster grids differ")]
    GridMismatch,
    #[error("not a geodesic triple: |d01 + d12 - d02| = {excess} exceeds {allowance}")]
    NotGeodesicTriple { excess: f64, allowance: f64 },
    #[error("not an S_n-isometry: {0}")]
    NotIsometry(String),
    #[error("ambiguous classification: {0}")]
    Ambiguous(String),
    #[error("map evaluation failed on probe {index}: {source}")]
    Evaluation {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::NotIsometry(_) | Error::Ambiguous(_) => 4,
            Error::ResolutionExhausted { .. } | Error::InsufficientResolution { .. } => 5,
            Error::Evaluation { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
