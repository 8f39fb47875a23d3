use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be positive, got {0}")]
    BadDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Jacobi identity fails on triple ({i}, {j}, {k}) with residual {residual:e}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },

    #[error("bad specification: {0}")]
    BadSpec(String),

    #[error("metric is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("metric is singular")]
    SingularMetric,

    #[error("degenerate plane: Gram determinant {0:e}")]
    DegeneratePlane(f64),

    #[error("vector outside the domain of F: {0}")]
    OutsideDomain(String),

    #[error("parameter out of range: {0}")]
    BadRange(String),

    #[error("metric is not admissible: {0}")]
    Inadmissible(String),

    #[error("operation requires family {expected}, got {got}")]
    WrongFamily {
        expected: &'static str,
        got: &'static str,
    },

    #[error("metric is not of Berwald type")]
    NotBerwald,

    #[error("Randers metric is not of Douglas type")]
    NotDouglas,

    #[error("algebra carries no {0} family tag")]
    MissingTag(&'static str),

    #[error("drift vector is not a multiple of b")]
    XNotInSpanB,

    #[error("metric is not adapted to the tag: {0}")]
    UnadaptedMetric(String),

    #[error("group is commutative or not nilpotent")]
    NonAdmissibleGroup,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("no sign change located: {0}")]
    NoZeroFound(String),
}
