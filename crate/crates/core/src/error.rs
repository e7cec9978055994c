use thiserror::Error;

use crate::jetspace::JetError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("component {} has a nonzero constant term; germs must fix the origin", .component + 1)]
    ConstantTerm { component: usize },
    #[error("a germ needs at least one component")]
    EmptyMap,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no finiteness certificate up to jet order {cutoff}")]
    NotFinite { cutoff: u32 },
    #[error("{what}: undecided up to cutoff {cutoff}")]
    Undecided { what: String, cutoff: u32 },
    #[error("germ is not of finite singularity type (or undecided at cutoff {cutoff})")]
    NotFst { cutoff: u32 },
    #[error("parameter value {value} lies on the excluded locus (factor {witness} vanishes)")]
    ExcludedParameter { value: String, witness: String },
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("({n},{p}) is not a boundary pair with a tabulated normal form")]
    NotBoundaryPair { n: usize, p: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("atlas data: {0}")]
    Atlas(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
