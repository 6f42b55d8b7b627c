use thiserror::Error;

/// Errors raised by the numeric kernel, the geometry layers and the verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("step size collapsed to {step:e} at t = {t}")]
    StepUnderflow { t: f64, step: f64 },
    #[error("right-hand side returned a non-finite value at t = {t}")]
    NonFiniteRhs { t: f64 },
    #[error("invalid integration span [{start}, {end}]")]
    InvalidSpan { start: f64, end: f64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix asymmetry {asymmetry:e} exceeds threshold")]
    NonSymmetric { asymmetry: f64 },
    #[error("rank deficiency at vector {index} (pivot {pivot:e})")]
    DegenerateSpan { index: usize, pivot: f64 },
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("metric not positive definite at {point:?} (min eigenvalue {min_eigenvalue:e})")]
    MetricNotPD { point: Vec<f64>, min_eigenvalue: f64 },
    #[error("point {point:?} is outside the chart domain")]
    OutsideChart { point: Vec<f64> },
    #[error("vectors span a degenerate plane (area {area:e})")]
    DegeneratePlane { area: f64 },
    #[error("k = {k} outside the admissible range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("geodesic left the chart domain at t = {t}")]
    LeftChartDomain { t: f64 },
    #[error("embedding Jacobian is rank deficient (smallest singular value {sigma:e})")]
    RankDeficientEmbedding { sigma: f64 },
    #[error("vector is not normal to the submanifold (tangential component {tangential:e})")]
    NotNormal { tangential: f64 },
    #[error("Lagrangian initial data invalid: {reason}")]
    NotLagrangian { reason: String },
    #[error("Jacobi matrix singular at t = {t}")]
    SingularAtT { t: f64 },
    #[error("model function has a pole at t = {t}")]
    PoleAtT { t: f64 },
    #[error("t = {t} is beyond the blow-up time {blowup} of the model solution")]
    BeyondBlowup { t: f64, blowup: f64 },
    #[error("curvature hypothesis violated: sampled Ric_{k} = {sampled} < {bound}")]
    HypothesisViolated { k: usize, sampled: f64, bound: f64 },
    #[error("grid point t = {t} is singular for the Lagrangian family")]
    SingularGrid { t: f64 },
    #[error("focal point found at t = {t}; focal radius is finite")]
    NotInfiniteFocal { t: f64 },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
