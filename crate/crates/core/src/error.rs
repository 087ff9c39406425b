use thiserror::Error;

/// Errors raised by the scattering model, the linear oracle, the sweep
/// engine and the optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A closed-form denominator vanished relative to the scale of its terms.
    #[error("degenerate denominator `{factor}`: |{factor}| = {magnitude:e} against term scale {scale:e}")]
    DegenerateDenominator {
        factor: &'static str,
        magnitude: f64,
        scale: f64,
    },

    #[error(
        "singular system: pivot {pivot:e} in column {column} below tolerance (row scale {scale:e})"
    )]
    SingularSystem {
        column: usize,
        pivot: f64,
        scale: f64,
    },

    /// The optimal atom-cavity coupling needs Γ₂ ≥ γ_c.
    #[error("optimal atom-cavity coupling undefined: Γ₂ = {gamma_2:e} < γ_c = {gamma_c:e}")]
    GOptUndefined { gamma_2: f64, gamma_c: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("invalid optimization problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
