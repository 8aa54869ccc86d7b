use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error(
        "degenerate parametrization: |gamma'| = {min_speed:e} at node {node} (max {max_speed:e})"
    )]
    DegenerateContour {
        node: usize,
        min_speed: f64,
        max_speed: f64,
    },

    #[error("sample {node} vanishes (|f| = {modulus:e}); winding number undefined")]
    VanishingSample { node: usize, modulus: f64 },

    #[error(
        "phase step of {step:.3} rad between nodes {node} and {next}; increase the node count"
    )]
    UnresolvedPhase { node: usize, next: usize, step: f64 },

    #[error("winding sum {raw:.6} is {residual:.3} away from an integer; increase the node count")]
    WindingResidual { raw: f64, residual: f64 },

    #[error("point {re}{im:+}i lies in the boundary refusal band (distance {distance:e}); use Plemelj boundary values instead")]
    NearBoundary { re: f64, im: f64, distance: f64 },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sample count {got} does not match contour node count {expected}")]
    SampleCount { expected: usize, got: usize },

    #[error("logarithm branch does not close: mismatch {mismatch:e} rad after one loop")]
    BranchNotClosed { mismatch: f64 },

    #[error("coefficient vanishes at node {node}")]
    VanishingCoefficient { node: usize },

    #[error(
        "operation requires the unit circle centred at the origin (max ||t| - 1| = {deviation:e})"
    )]
    NotUnitCircle { deviation: f64 },

    #[error("variable coefficients with a non-zero odd part are not covered by this theory")]
    GeneralRegime,

    #[error("expected regime {expected}, found {found}")]
    WrongRegime {
        expected: &'static str,
        found: &'static str,
    },

    #[error("constant coefficients a and b are both zero")]
    ZeroCoefficients,

    #[error("expected {expected} free constants, got {got}")]
    ConstantCount { expected: usize, got: usize },

    #[error("conformal map check failed: {0}")]
    ConformalMap(String),

    #[error("value at infinity is not determined for this representation")]
    UndeterminedAtInfinity,

    #[error("problem is unsolvable; there is no solution to evaluate")]
    Unsolvable,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn near_boundary(z: Complex64, distance: f64) -> Error {
    Error::NearBoundary {
        re: z.re,
        im: z.im,
        distance,
    }
}
