use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus is singular (k = ±1), complete integral diverges")]
    ModulusSingular,
    #[error("series or quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("phase jump between samples {index} and {next}: refine the grid", next = .index + 1)]
    PhaseJump { index: usize },
    #[error("argument within {radius:e} of a pole")]
    PoleProximity { radius: f64 },
    #[error("argument outside the convergence strip of the series")]
    StripViolation,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("unknown modular case {0}, expected 1..=6")]
    BadCase(u8),
    #[error("energy out of range: {0}")]
    EnergyRange(String),
    #[error("velocity |v| = {0} is not below 1")]
    SuperluminalVelocity(f64),
    #[error("no square-root branch satisfies the relations: {0}")]
    BranchInconsistent(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
