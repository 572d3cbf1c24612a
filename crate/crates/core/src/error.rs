use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("grade {0} exceeds the supported maximum of 3")]
    GradeOverflow(usize),

    #[error("coefficient vector has length {found}, expected {expected}")]
    CoefficientLength { expected: usize, found: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("exact and float values mixed: {0}")]
    ModeMix(String),

    #[error("value {0:?} lies outside the declared box of radius {1}")]
    OutOfBox(Vec<i64>, i64),

    #[error("box of radius {have} too small, need at least {need}")]
    BoxTooSmall { have: i64, need: i64 },

    #[error("matrix is not antisymmetric mod 1: {0}")]
    NotAntisymmetric(String),

    #[error("not normalized: {0}")]
    NotNormalized(String),

    #[error("tricharacter is not integral on the lattice: {0}")]
    NonIntegralTricharacter(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("data not compatible with period {period}: {reason}")]
    PeriodIncompatible { period: u32, reason: String },

    #[error("ambiguous phase step of exactly 1/2 between `{from}` and `{to}`")]
    AmbiguousStep { from: String, to: String },

    #[error("family invariant violated: {0}")]
    FamilyInvariant(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("section is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("product vanishes identically, associator undefined")]
    VanishingProduct,

    #[error("ratio is not a constant root of unity: {0}")]
    NonConstantRatio(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
