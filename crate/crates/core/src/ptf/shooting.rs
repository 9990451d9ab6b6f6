//! Minimizer from the Euler-Lagrange equation.
//!
//! At a minimizer `(1/2)(6 pi^2)^{2/3} rho^{2/3} = (Phi_rho + mu_c)_+` with
//! `Phi_rho = rho * |x|^{-1}` and a Lagrange multiplier `mu_c < 0`. With
//! `c = (1/2)(6 pi^2)^{2/3}` and `psi = Phi_rho + mu_c`, the density is
//! `(psi/c)^{3/2}` where `psi > 0`, and `-Laplace psi = 4 pi (psi/c)^{3/2}`.
//! Writing `psi(r) = psi_0 theta(r/a)` turns this into the Lane-Emden equation
//! of index 3/2 provided `a^2 = c^{3/2} / (4 pi psi_0^{1/2})`. Unit mass fixes
//! the scale: `a = c (M_0 / 16 pi^2)^{1/3}` with `M_0 = -xi_1^2 theta'(xi_1)`.
//! The support is the ball of radius `R = a xi_1`; outside it
//! `Phi_rho = 1/r`, and `psi(R) = 0` gives `mu_c = -1/R`.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{LaneEmdenProfile, PtfSolution, SolverMethod};
use crate::numerics::special::c_tf;
use crate::numerics::{RadialDensity, RadialGrid};
use crate::{Error, Result};

/// Spatial scale, central potential and density amplitude of the minimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytropeScales {
    pub length: f64,
    pub psi0: f64,
    pub amplitude: f64,
    pub radius: f64,
}

pub fn polytrope_scales(profile: &LaneEmdenProfile) -> Result<PolytropeScales> {
    let m0 = profile.mass_integral();
    if !(m0 > 0.0 && profile.first_zero() > 0.0) {
        return Err(Error::InvalidDensity(format!(
            "degenerate Lane-Emden profile (M_0 = {m0})"
        )));
    }
    let c = 0.5 * (6.0 * PI * PI).powf(2.0 / 3.0);
    let length = c * (m0 / (16.0 * PI * PI)).cbrt();
    let psi0 = c.powi(3) / (16.0 * PI * PI * length.powi(4));
    Ok(PolytropeScales {
        length,
        psi0,
        amplitude: (psi0 / c).powf(1.5),
        radius: length * profile.first_zero(),
    })
}

/// The minimizer on the default grid.
pub fn minimizer_from_profile(profile: &LaneEmdenProfile) -> Result<PtfSolution> {
    minimizer_on_grid(profile, Arc::new(RadialGrid::default_log()))
}

/// The minimizer sampled on `grid` and renormalized to unit grid mass. The
/// energy parts come from the profile integrals, not from the grid.
pub fn minimizer_on_grid(profile: &LaneEmdenProfile, grid: Arc<RadialGrid>) -> Result<PtfSolution> {
    let s = polytrope_scales(profile)?;
    let c = 0.5 * (6.0 * PI * PI).powf(2.0 / 3.0);
    let j1 = profile.kinetic_integral();
    let a3 = s.length.powi(3);
    let density = RadialDensity::from_fn(grid, |r| {
        s.amplitude * profile.theta(r / s.length).powf(1.5)
    })?
    .normalized(1.0)?;
    // int rho^{5/3} = 4 pi (psi0/c)^{5/2} a^3 J_1
    let kinetic = c_tf() * 4.0 * PI * (s.psi0 / c).powf(2.5) * a3 * j1;
    // int rho Phi = int rho psi - mu_c
    let coulomb = 0.5 * (4.0 * PI * s.amplitude * s.psi0 * a3 * j1 + 1.0 / s.radius);
    Ok(PtfSolution::assemble(
        density,
        kinetic,
        coulomb,
        -1.0 / s.radius,
        SolverMethod::Shooting,
        0,
    ))
}
