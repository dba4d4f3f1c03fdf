use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },

    #[error("matrix has a non-finite entry at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error(
        "ambiguous rank decision in {context}: gap ratio {gap_ratio:e} below required {required:e}"
    )]
    AmbiguousRank {
        context: String,
        gap_ratio: f64,
        required: f64,
    },

    #[error("invalid tolerance policy: {0}")]
    Policy(String),

    #[error("not a Euclidean distance matrix: {0}")]
    NotAnEdm(String),

    #[error(
        "Dw = e residual {residual:e} exceeds {tolerance:e}: not an EDM or numerically degenerate"
    )]
    ColumnSpace { residual: f64, tolerance: f64 },

    #[error("EDM classification conflict: rank test says {by_rank}, e^T w test says {by_etw} (rank {rank}, r {embedding_dim}, e^T w = {e_dot_w:e})")]
    ClassificationConflict {
        by_rank: String,
        by_etw: String,
        rank: usize,
        embedding_dim: usize,
        e_dot_w: f64,
    },

    #[error("packing violation pair ({i},{j}): squared distance {dist_sq} < 1")]
    Packing { i: usize, j: usize, dist_sq: f64 },

    #[error("exact coordinates of point {index} disagree with float coordinates")]
    ExactMismatch { index: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("theorem hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("malformed realization file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag for reports and exit-code mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSymmetric { .. } | Error::NonFinite { .. } | Error::Shape(_) => "matrix",
            Error::NoConvergence { .. } => "no-convergence",
            Error::AmbiguousRank { .. } => "ambiguous-rank",
            Error::Policy(_) => "policy",
            Error::NotAnEdm(_) | Error::ColumnSpace { .. } => "not-an-edm",
            Error::ClassificationConflict { .. } => "classification-conflict",
            Error::Packing { .. } => "packing-violation",
            Error::ExactMismatch { .. } => "exact-mismatch",
            Error::Parameter(_) => "parameter",
            Error::Precondition(_) => "precondition",
            Error::Hypothesis(_) => "hypothesis",
            Error::Consistency(_) => "consistency",
            Error::Format(_) | Error::Json(_) => "format",
            Error::Io(_) => "io",
        }
    }

    /// True for errors caused by bad user input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_)
                | Error::Hypothesis(_)
                | Error::Format(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::Policy(_)
        )
    }
}
