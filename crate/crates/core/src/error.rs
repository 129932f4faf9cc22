use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("magnetic label 2m = {two_m} is invalid for 2j = {two_j}")]
    InvalidMagnetic { two_j: u32, two_m: i32 },

    #[error("spin mismatch: 2j = {left} vs 2j = {right}")]
    SpinMismatch { left: u32, right: u32 },

    #[error("quadrature integrand is not finite at {node}")]
    QuadratureNaN { node: String },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("vectors are not orthogonal (|overlap| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("observable {index} does not have spectrum in {{-1, +1}} (deviation {deviation:e})")]
    InvalidSpectrum { index: usize, deviation: f64 },

    #[error("observables {left} and {right} do not commute (deviation {deviation:e})")]
    NotCommuting { left: usize, right: usize, deviation: f64 },

    #[error("marginal mismatch between joints {left} and {right} (deviation {deviation:e})")]
    MarginalMismatch { left: usize, right: usize, deviation: f64 },

    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("objective is not finite at {point:?}")]
    ObjectiveNaN { point: Vec<f64> },
}
