use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point (w = {w}, k = {k}) is not strictly inside the two-spinon band")]
    OutsideBand { w: f64, k: f64 },

    #[error("momentum k = {0} closes the two-spinon window")]
    DegenerateWindow(f64),

    #[error("momentum k = {0} lies outside the zone [0, 2π]")]
    OutOfZone(f64),

    #[error("quadrature did not converge: estimated error {abserr:e} above target {target:e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        abserr: f64,
        target: f64,
        subdivisions: usize,
    },

    #[error("the fixed-k weight diverges at k = {0}: the band bottom touches w = 0")]
    DivergentWeight(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {0}")]
    ConvergenceFailure(String),

    #[error("chain of {0} sites not supported (need an even size in 2..=14)")]
    Size(usize),

    #[error("diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
