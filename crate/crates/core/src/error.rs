use thiserror::Error;

/// Errors surfaced by the polynomial, CMV, interpolation, and MISP layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("star involution needs nominal degree >= polynomial degree (k = {k}, deg = {deg})")]
    StarDegree { k: usize, deg: usize },

    #[error("root finding requires degree >= 1")]
    RootsOfConstant,

    #[error("root finder failed to converge after {iterations} iterations (max step {max_step:.3e})")]
    RootsDiverged { iterations: u32, max_step: f64 },

    #[error("not divisible: relative remainder norm {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotDivisible { residual: f64, tol: f64 },

    #[error("not a Schur-stable Szegő polynomial: |alpha_{index}| = {modulus} is not < 1")]
    NotSchur { index: usize, modulus: f64 },

    #[error("numerical failure in {stage}: {detail}")]
    Numerical { stage: &'static str, detail: String },

    #[error("sieving not supported; n must be even (got n = {0})")]
    OddDimension(usize),

    #[error("heights differ: {0:?} vs {1:?}")]
    HeightMismatch(Option<usize>, Option<usize>),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("rank ambiguity in {stage}: {detail}")]
    RankAmbiguity { stage: &'static str, detail: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("infeasible at {stage}: {reason}")]
    Infeasible { stage: &'static str, reason: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
