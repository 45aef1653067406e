use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The shooting trajectory left the positive cone.
    #[error("profile left the positive cone at s = {s:.6} (lambda = {lambda}, mass = {mass})")]
    PositivityLost { s: f64, lambda: f64, mass: f64 },

    /// Shooting from the constant solution: there is no first critical point.
    #[error("initial height {0} is the constant solution")]
    ConstantStart(f64),

    #[error("no nonconstant branch found: {0}")]
    NoBranch(String),

    /// Damped iteration on the nonlocal mass did not settle.
    #[error("fixed point on the nonlocal mass did not converge after {iterations} iterations")]
    FixedPointDiverged {
        iterations: usize,
        mass_history: Vec<f64>,
    },

    #[error("did not converge: {0}")]
    NotConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
