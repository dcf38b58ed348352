use thiserror::Error;

/// Errors raised by the algebra kernel and the structure-specific modules.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unsupported dimension {0} (only 7 and 8 are modelled)")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),
    #[error("grade overflow: {0} + {1} exceeds dimension {2}")]
    GradeOverflow(usize, usize, usize),
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("multi-index {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("interior product of a 0-form")]
    GradeZero,
    #[error("form has support outside the index set {0:?}")]
    OutsideSubspace(Vec<usize>),
    #[error("symmetric tensor expected a traceless input")]
    NonzeroTrace,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("input lies outside the required module: {0}")]
    OutsideModule(String),
    #[error("spanning set is rank deficient (rank {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined (rank {rank} < {unknowns})")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
