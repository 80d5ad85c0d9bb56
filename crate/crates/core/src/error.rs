use thiserror::Error;

/// Errors raised by calculus construction, subalgebra analysis and solving.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown calculus `{0}`")]
    UnknownCalculus(String),
    #[error("unknown atom name `{0}`")]
    UnknownAtomName(String),
    #[error("atom index {0} out of range")]
    InvalidAtom(usize),
    #[error("relation does not belong to calculus {0}")]
    CalculusMismatch(String),
    #[error("invalid calculus definition: {0}")]
    InvalidCalculus(String),
    #[error("composition {0} cannot be projected onto the coarse partition")]
    ProjectionFailure(String),
    #[error("calculus {0} has no dimension map")]
    NoDimensionMap(String),
    #[error("calculus {0} has no conceptual neighbourhood order")]
    NoCngOrder(String),
    #[error("operation undefined on the empty relation")]
    EmptyRelation,
    #[error("closure exceeded cap ({0} relations)")]
    CapExceeded(usize),
    #[error("not a subalgebra: {0}")]
    NotASubalgebra(String),
    #[error("enumeration structure violated: {0}")]
    StructureViolation(String),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("variable index {index} out of range for network of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("scenario construction failed: {0}")]
    ConstructionFailure(String),
    #[error("search space too large ({0} candidate labelings)")]
    SearchSpaceTooLarge(u128),
    #[error("realization unsupported for {0}")]
    UnsupportedCalculus(String),
    #[error("network is not atomic")]
    NotAtomic,
    #[error("network is not path consistent")]
    NotPathConsistent,
    #[error("constraint ({0}, {1}) lies off the chordal graph")]
    EdgeCoverViolation(usize, usize),
    #[error("solver verdicts disagree: {0}")]
    VerdictMismatch(String),
    #[error("label pool has no non-universal relation")]
    EmptyPool,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
