//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by curve construction, density evaluation, quadrature,
/// and the higher-level transform operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown builtin curve `{0}`")]
    UnknownCurve(String),

    #[error("invalid curve parameters: {0}")]
    InvalidCurveParams(String),

    #[error("curve is not simple: points at parameters {tau1} and {tau2} are {dist:.3e} apart")]
    SelfIntersection { tau1: f64, tau2: f64, dist: f64 },

    #[error("parameterization derivative vanishes near tau = {tau}")]
    VanishingDerivative { tau: f64 },

    #[error("need at least {min} points to build a curve, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("consecutive input points {index} and {} coincide", .index + 1)]
    DuplicatePoint { index: usize },

    #[error("parameter {tau} is at or within {tol:.1e} of an endpoint of an open curve")]
    EndpointParameter { tau: f64, tol: f64 },

    #[error("parameter {tau} lies outside the curve domain [{a}, {b}]")]
    ParameterOutOfDomain { tau: f64, a: f64, b: f64 },

    #[error("point ({re}, {im}) is outside the frame's local window footprint")]
    OutsideFrameWindow { re: f64, im: f64 },

    #[error("unknown builtin density `{0}`")]
    UnknownDensity(String),

    #[error("invalid density parameters: {0}")]
    InvalidDensityParams(String),

    #[error("density evaluation returned a non-finite value at tau = {tau}")]
    DensityEvaluation { tau: f64 },

    #[error("tabulated data does not cover tau = {tau} and extrapolation is forbidden")]
    TabulatedOutOfRange { tau: f64 },

    #[error("tabulated data needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("table abscissae must be strictly increasing (violation at row {index})")]
    NonMonotoneTable { index: usize },

    #[error("integrand returned a non-finite value at t = {t}")]
    NonFiniteIntegrand { t: f64 },

    #[error("adaptive quadrature failed to converge after {subdivisions} subdivisions (error {error:.3e} > tolerance {tol:.3e})")]
    QuadratureFailure {
        subdivisions: usize,
        error: f64,
        tol: f64,
    },

    #[error("singular point {t0} is within {tol:.1e} of an integration endpoint")]
    SingularPointAtEndpoint { t0: f64, tol: f64 },

    #[error("point ({re}, {im}) lies on the curve (distance {dist:.3e})")]
    PointOnCurve { re: f64, im: f64, dist: f64 },

    #[error("generated approach point {index} landed on the curve")]
    SequencePointOnCurve { index: usize },

    #[error("generated approach point {index} classified as {got:?}, wanted {want:?}")]
    SequenceSideMismatch {
        index: usize,
        got: crate::curve::Side,
        want: crate::curve::Side,
    },

    #[error("approach radii must be strictly decreasing and positive")]
    InvalidRadii,

    #[error("convergence run did not stabilize: {0}")]
    NotConverged(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
