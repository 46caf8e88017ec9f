use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("asymmetric edge relation: {0}->{1} present but {1}->{0} missing")]
    Asymmetric(usize, usize),

    #[error("host degree below internal degree at vertex {vertex}: host {host} < internal {internal}")]
    HostDegreeDeficit {
        vertex: usize,
        host: usize,
        internal: usize,
    },

    #[error("expected {expected} per-vertex values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at vertex {0}")]
    NonFinite(usize),

    #[error("phase given on non-edge {0}-{1}")]
    PhaseOnNonEdge(usize, usize),

    #[error("phase violates antisymmetry on edge {0}-{1}")]
    PhaseNotAntisymmetric(usize, usize),

    #[error("a phase field is required for magnetic operators and only for them")]
    PhaseKindMismatch,

    #[error("dimension mismatch: operator has {expected}, vector has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible radial family: {0}")]
    InfeasibleFamily(String),

    #[error("graphs have different vertex counts ({0} vs {1})")]
    VertexSetMismatch(usize, usize),

    #[error("edge {0}-{1} of the second graph is not an edge of the first")]
    NotSubgraph(usize, usize),

    #[error("{size} vertices exceed the enumeration limit of {limit}")]
    TooLargeForEnumeration { size: usize, limit: usize },

    #[error("dimension {size} exceeds the dense eigensolver limit {limit}")]
    TooLargeForDense { size: usize, limit: usize },

    #[error("region must be nonempty")]
    EmptyRegion,

    #[error("potential must be non-negative (vertex {0})")]
    NegativePotential(usize),

    #[error("ratio iteration did not converge within {0} steps")]
    NoConvergence(usize),

    #[error("arithmetic overflow in exact cut computation")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
