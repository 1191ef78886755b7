use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("negative interval width at row {row}, column {col}")]
    NegativeWidth { row: usize, col: usize },
    #[error("unknown distribution `{0}`")]
    UnknownDistribution(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subset is empty")]
    EmptySubset,
    #[error("frame has no class labels")]
    MissingLabels,
    #[error("at least two classes are required, found {0}")]
    SingleClass(usize),
    #[error("orthogonality matrix is singular; set a positive ridge")]
    SingularM,
    #[error("Fisher ratio denominator is degenerate ({0:e})")]
    DegenerateDenominator(f64),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("class `{class}` has {count} observations, need at least {needed}")]
    ClassTooSmall {
        class: String,
        count: usize,
        needed: usize,
    },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("robust scale is zero for class `{0}`")]
    ZeroScale(String),
    #[error("priors do not match the confusion matrix: {0}")]
    PriorMismatch(String),
    #[error("no records for the requested class")]
    EmptyClass,
    #[error("silhouette report is empty")]
    EmptyReport,
    #[error("unknown class label `{0}`")]
    UnknownClass(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unsupported model file version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical pipeline rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SingularM
                | Error::DegenerateDenominator(_)
                | Error::SolverFailure(_)
                | Error::ZeroScale(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
