use thiserror::Error;

/// Errors raised across the curvature, biquotient and census layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported algebra {family}({n})")]
    UnsupportedAlgebra { family: String, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix fails the group condition (defect {defect:.3e})")]
    NotInGroup { defect: f64 },

    #[error("unknown or inapplicable subalgebra `{0}`")]
    UnknownSubalgebra(String),

    #[error("subspace is not closed under the bracket (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("operator is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate plane (Gram determinant {0:.3e})")]
    DegeneratePlane(f64),

    #[error("not a symmetric pair: [m,m] escapes k along {component} (norm {norm:.3e})")]
    NotSymmetricPair { component: String, norm: f64 },

    #[error("vector is not horizontal (vertical component {defect:.3e})")]
    NotHorizontal { defect: f64 },

    #[error("metric is not right-invariant under the isotropy algebra (defect {defect:.3e})")]
    NotRightInvariant { defect: f64 },

    #[error("k and l sums differ: {k_sum} != {l_sum}")]
    SumMismatch { k_sum: i64, l_sum: i64 },

    #[error("({p}, {q}) are not coprime")]
    NotCoprime { p: i64, q: i64 },

    #[error("sigma_3 - sigma_1 sigma_2 = {raw} is not divisible by 8")]
    Divisibility { raw: i64 },

    #[error("congruence r = s = 1 mod 4 violated for ({r}, {s})")]
    Congruence { r: i64, s: i64 },

    #[error("order bound {given} too small, exhaustive check needs {required}")]
    OrderBoundTooSmall { given: u64, required: u64 },

    #[error("budget must contain at least one sample")]
    EmptyBudget,

    #[error("maximum curvature {0:.6e} is not positive; pinching undefined")]
    NonPositiveMax(f64),

    #[error("parameter grid is empty")]
    EmptyGrid,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
