use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("b = {b} is a non-positive integer; the Kummer series is undefined")]
    InvalidB { b: String },
    #[error("argument {zeta} lies on the branch cut (-inf, 0]")]
    BranchCutAmbiguity { zeta: String },
    #[error("gamma function pole at non-positive integer {z}")]
    PoleAtNonPositiveInteger { z: String },
    #[error("beta coefficient undefined for this kind and b = {b}")]
    BetaUndefined { b: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),
    #[error("wavefunction node at z = {z}: superpotential has a pole")]
    PoleAtNode { z: f64 },
    #[error("grid too coarse: estimated stencil error {estimate:e} exceeds {limit:e}")]
    GridTooCoarse { estimate: f64, limit: f64 },
    #[error("every evaluation point lies next to a node of u")]
    AllPointsNearNodes,
    #[error("superpotential pole too close to z = {z}")]
    PoleTooClose { z: f64 },
    #[error("independent oracle unavailable: {0}")]
    OracleUnavailable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
