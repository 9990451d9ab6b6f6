use thiserror::Error;

use crate::numerics::RadialDensity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "grid too coarse for {what}: error {error:.3e} exceeds declared tolerance {tolerance:.1e}"
    )]
    GridTooCoarse {
        what: &'static str,
        error: f64,
        tolerance: f64,
    },

    #[error("densities live on incompatible grids")]
    IncompatibleGrids,

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("{name} = {value} outside of {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error(
        "Riesz energy routes disagree: real space {real_space:.12e}, Fourier {fourier:.12e} \
         (relative tolerance {tolerance:.1e})"
    )]
    RieszDisagreement {
        real_space: f64,
        fourier: f64,
        tolerance: f64,
    },

    #[error("{bound} requires {required}, got alpha = {alpha}, U = {u}")]
    RegimeViolated {
        bound: &'static str,
        required: &'static str,
        alpha: f64,
        u: f64,
    },

    #[error("Lane-Emden solution has no zero before xi = {xi_max}")]
    NoLaneEmdenZero { xi_max: f64 },

    #[error("gradient solver did not converge after {iterations} iterations (energy {energy:.12e}): {reason}")]
    ConvergenceFailure {
        iterations: usize,
        energy: f64,
        reason: &'static str,
        iterate: Box<RadialDensity>,
    },

    #[error("record parse error: {0}")]
    Record(String),
}
