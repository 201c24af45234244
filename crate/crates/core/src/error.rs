use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("SUBSPACE_NOT_NESTED: first subspace is not contained in the second")]
    SubspaceNotNested,
    #[error("NOT_AN_IDEAL: subspace is not an ideal")]
    NotAnIdeal,
    #[error("NOT_SUBALGEBRA: subspace is not bracket-closed")]
    NotSubalgebra,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("CHAIN_NOT_NESTED: chain member {0} does not strictly contain its predecessor")]
    ChainNotNested(usize),
    #[error("NOT_SUBALGEBRA: chain member {0} is not a subalgebra")]
    NotSubalgebra(usize),
    #[error("INCOMPLETE: no rational codimension-1 subalgebra found between dimensions {lower} and {upper}")]
    Incomplete { lower: usize, upper: usize },
    #[error("UNDECIDED: irrational spectrum while building a flag")]
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("NOT_CLOSED: the 2-form is not closed")]
    NotClosed,
    #[error("INVALID_FLAG: {0}")]
    InvalidFlag(String),
    #[error("NESTING_VIOLATION: kernels are not nested at step {0}")]
    NestingViolation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("NO_REPULSIVE_VERTEX: the diagram has no weight-zero repulsive vertex")]
    NoRepulsiveVertex,
    #[error("SPLIT_INVARIANT_FAILED: {0}")]
    SplitInvariantFailed(String),
    #[error("IRRATIONAL_SPECTRUM: no rational invariant hyperplane at descent step {0}")]
    IrrationalSpectrum(usize),
    #[error("DESCENT_STUCK: {0}")]
    DescentStuck(String),
    #[error("NOT_SEMISIMPLE: {0}")]
    NotSemisimple(String),
    #[error("AUDIT_FAILED: {0}")]
    AuditFailed(String),
    #[error("DEFORM_STALLED: repeated passes did not reach a simple diagram")]
    DeformStalled,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Flag(#[from] FlagError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangianError {
    #[error("NOT_SIMPLE: the diagram is not simple")]
    NotSimple,
    #[error("NOT_LAGRANGIAN: {0}")]
    NotLagrangian(String),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilagrangianError {
    #[error("DEGENERATE_FORM: the 2-form has a nonzero kernel")]
    DegenerateForm,
    #[error("NOT_TRANSVERSE: the two subspaces are not complementary")]
    NotTransverse,
    #[error("NOT_LAGRANGIAN: {0}")]
    NotLagrangian(String),
    #[error("KERNEL_NOT_IDEAL: the kernel of the form is not an ideal")]
    KernelNotIdeal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimitivityError {
    #[error("NOT_SUBALGEBRA: subspace is not bracket-closed")]
    NotSubalgebra,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("PARSE_ERROR at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("SCHEMA_ERROR: {0}")]
    Schema(String),
    #[error("RATIONAL_FORMAT_ERROR: {0}")]
    RationalFormat(String),
}
