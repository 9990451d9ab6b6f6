use std::f64::consts::SQRT_2;

use crate::{Error, Result};

/// `Physical` is `sqrt(2) alpha < U`, where the repulsion wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Physical,
    Boundary,
    Unphysical,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Physical => "physical",
            Regime::Boundary => "boundary",
            Regime::Unphysical => "unphysical",
        }
    }
}

/// Coupling constants of the N-polaron problem.
///
/// `beta = sqrt(2) alpha - U` is derived and never stored separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    alpha: f64,
    u: f64,
    n: u64,
    lambda: f64,
}

impl CouplingParams {
    /// Parameters with the ultraviolet cutoff removed (`Lambda = inf`).
    pub fn new(alpha: f64, u: f64, n: u64) -> Result<Self> {
        Self::with_cutoff(alpha, u, n, f64::INFINITY)
    }

    pub fn with_cutoff(alpha: f64, u: f64, n: u64, lambda: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[0, inf)",
            });
        }
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::OutOfRange {
                name: "U",
                value: u,
                range: "[0, inf)",
            });
        }
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "N",
                value: 0.0,
                range: "{1, 2, ...}",
            });
        }
        if !(lambda > 0.0) {
            return Err(Error::OutOfRange {
                name: "Lambda",
                value: lambda,
                range: "(0, inf]",
            });
        }
        Ok(Self {
            alpha,
            u,
            n,
            lambda,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        SQRT_2 * self.alpha - self.u
    }

    /// Sign of `beta`: exact comparison of `sqrt(2) alpha` with `U`.
    pub fn regime(&self) -> Regime {
        let b = SQRT_2 * self.alpha;
        if b > self.u {
            Regime::Unphysical
        } else if b < self.u {
            Regime::Physical
        } else {
            Regime::Boundary
        }
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::with_cutoff(self.alpha, self.u, n, self.lambda)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_cutoff(alpha, self.u, self.n, self.lambda)
    }
}
