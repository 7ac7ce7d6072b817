use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("radius {r} outside the profile domain [0, {two_a}]")]
    RadiusOutOfDomain { r: f64, two_a: f64 },

    #[error("operation requires m(r) > 0; r = {0} is a pole")]
    AtPole(f64),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile is not symmetric about the equator (max residual {residual:.3e}, tolerance {tolerance:.1e})")]
    Asymmetric { residual: f64, tolerance: f64 },

    #[error("wind strength mu = {mu} violates strong convexity (mu must be in [0, {mu_max}))")]
    ConvexityViolation { mu: f64, mu_max: f64 },

    #[error("zero tangent vector has no Finsler norm")]
    ZeroVector,

    #[error("Clairaut constant {nu} not admissible: {reason}")]
    ClairautOutOfRange { nu: f64, reason: String },

    #[error("geodesic cannot traverse [{r1}, {r2}]: m < |nu| = {nu} inside the interval")]
    NotTraversable { nu: f64, r1: f64, r2: f64 },

    #[error("geodesic with nu = {nu} reached the pole chart corner at s = {s}")]
    NumericalCorner { nu: f64, s: f64 },

    #[error("step size underflow at s = {0}")]
    StepUnderflow(f64),

    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),

    #[error("quadrature did not reach tolerance (estimated error {0:.3e})")]
    QuadratureFailed(f64),

    #[error("grid too small: {got} points, need at least {need}")]
    GridTooSmall { got: usize, need: usize },

    #[error("no conjugate point found within s = {s_max}")]
    NoConjugatePoint { s_max: f64 },

    #[error("theorem hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),

    #[error("path kind mismatch: {0}")]
    PathKind(String),

    #[error("resolution mismatch: {0}")]
    ResolutionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
