use thiserror::Error as ThisError;

/// Failures raised by constructions, quadrature, and the flow solver.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("degenerate segment between samples {index} and {}", index + 1)]
    DegenerateSegment { index: usize },
    #[error("angle lift failed at sample {index}: turning step {step} rad")]
    LiftFailure { index: usize, step: f64 },
    #[error("under-resolved curve: {0}")]
    UnderResolved(String),
    #[error("curve is not closed: end gap {gap}")]
    NotClosed { gap: f64 },
    #[error("join {index} is not horizontal: tangent defect {defect}")]
    Join { index: usize, defect: f64 },
    #[error("assembly defect: {0}")]
    Assembly(String),
    #[error("perturbation window: {0}")]
    Window(String),
    #[error("perturbation monotonicity: {0}")]
    Monotonicity(String),
    #[error("banded solve hit a zero pivot at row {row}")]
    LinearSolve { row: usize },
    #[error("immersion lost at t = {t}: min segment {min_segment} below floor {floor}")]
    ImmersionLoss { t: f64, min_segment: f64, floor: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
