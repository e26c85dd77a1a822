use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Only the two-disk competitor spans the circles.
    #[error("no catenoid spans the circles: h/r = {ratio} exceeds the critical ratio {critical}")]
    NoCatenoid { ratio: f64, critical: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("profile has a negative radius at node {index}")]
    DegenerateProfile { index: usize },

    #[error("invalid sweepout path: {0}")]
    InvalidPath(String),

    #[error("normal offset {offset} exceeds the chart validity radius {radius}")]
    ChartOverflow { offset: f64, radius: f64 },

    #[error("base surface is not minimal: mean curvature residual {residual} > {tol}")]
    NotMinimal { residual: f64, tol: f64 },

    #[error("perturbed metric is not positive definite")]
    NotPositiveDefinite,

    #[error("radius {radius} too large: limit {limit}")]
    RadiusTooLarge { radius: f64, limit: f64 },

    #[error("eigen-solver failure: {0}")]
    SolverFailure(String),

    #[error("slice at t = {t} has area {area} >= budget {budget}")]
    BudgetViolated { t: f64, area: f64, budget: f64 },

    #[error("h = {h} outside the admissible regime h <= {h_max}")]
    RegimeViolation { h: f64, h_max: f64 },

    #[error("mesh format error on line {line}: {msg}")]
    MeshFormat { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
