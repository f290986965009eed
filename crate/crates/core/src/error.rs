use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    // gf2
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not alternating (nonzero diagonal or asymmetric)")]
    NotAlternating,
    #[error("odd dimension {0}")]
    OddDimension(usize),

    // multilinear
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis change matrix is singular over GF(2)")]
    SingularBasisChange,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("wrong tensor order: expected {expected}, got {got}")]
    WrongOrder { expected: usize, got: usize },
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("wrong format (order {order}, dim {dim}); expected order 3, dim 2")]
    WrongFormat { order: usize, dim: usize },
    #[error("invariant format (order {inv_order}, dim {inv_dim}) does not match tensor (order {order}, dim {dim})")]
    FormatMismatch {
        inv_order: usize,
        inv_dim: usize,
        order: usize,
        dim: usize,
    },
    #[error("unbalanced invariant: {0}")]
    UnbalancedInvariant(String),
    #[error("Det2 is not supported for order {order}, dim {dim}")]
    UnsupportedFormat { order: usize, dim: usize },

    // homology
    #[error("malformed simplex: {0}")]
    MalformedSimplex(String),
    #[error("first Z2-cohomology is trivial")]
    TrivialCohomology,
    #[error("complex is not a closed pseudomanifold of dimension {0}")]
    NotClosed(usize),
    #[error("cochain {0} is not a cocycle")]
    NotCocycle(usize),
    #[error("expected {expected} cochains, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("not a closed surface")]
    NotASurface,

    // graphs
    #[error("graph is acyclic")]
    Acyclic,
    #[error("first Betti number {b} exceeds oracle limit {limit}")]
    TooLarge { b: usize, limit: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid edge {index}: {message}")]
    InvalidEdge { index: usize, message: String },

    // lattice
    #[error("dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("body is not a flat Riemannian (ellipsoid) norm")]
    NotRiemannianFlat,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("enumeration of {points} points exceeds budget {budget}")]
    BudgetExceeded { points: f64, budget: f64 },
    #[error("invalid body: {0}")]
    InvalidBody(String),

    // symplectic
    #[error("no pairing permutation exists")]
    NoPairing,
}
