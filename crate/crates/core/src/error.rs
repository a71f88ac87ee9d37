use thiserror::Error;

/// Errors raised by the algebraic and numeric layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is outside the supported range 1..=6")]
    UnsupportedDimension(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("permutation of length {perm} does not match {ctx} Koszul degrees")]
    SizeMismatch { perm: usize, ctx: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("multivector carries a nonzero v-power where a pure multivector is required")]
    NonzeroVPower,

    #[error("slot {slot} of the gamma word is not homogeneous in (theta-degree, v-power)")]
    InhomogeneousSlot { slot: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge ({vertex}, {slot}) is not a black-to-black edge")]
    NotBlackEdge { vertex: usize, slot: usize },

    #[error("coincident points")]
    CoincidentPoints,

    #[error("Monte Carlo weight required for graph {0} but the weight source is exact-only")]
    McUnavailable(String),

    #[error("unsupported order: {0}")]
    Unsupported(String),

    #[error("bivector is not Poisson: [pi, pi] != 0")]
    NotPoisson,

    #[error("Poisson data is not unimodular")]
    NotUnimodular,

    #[error("not an affine vector field")]
    NotAffine,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
