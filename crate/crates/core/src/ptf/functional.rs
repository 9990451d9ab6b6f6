use std::f64::consts::PI;

use crate::numerics::special::{a_mu, c_tf};
use crate::numerics::{coulomb_potential, RadialDensity};
use crate::{Error, Result};

/// The three parts of the functional at one density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtfEnergy {
    pub total: f64,
    /// `(3/10)(6 pi^2)^{2/3} int rho^{5/3}`
    pub kinetic: f64,
    /// `(1/2) int int rho(x) rho(y) / |x - y|`
    pub coulomb: f64,
}

/// Discrete value of the functional on the density's grid.
pub fn ptf_energy(rho: &RadialDensity) -> Result<PtfEnergy> {
    let kinetic = c_tf() * rho.integral_of_power(5.0 / 3.0);
    let phi = coulomb_potential(rho)?;
    let coulomb = 0.5
        * rho
            .grid()
            .weights()
            .iter()
            .zip(rho.values())
            .zip(phi.values())
            .map(|((w, v), p)| w * v * p)
            .sum::<f64>();
    Ok(PtfEnergy {
        total: kinetic - coulomb,
        kinetic,
        coulomb,
    })
}

/// Gradient of the discrete functional with respect to the node values,
/// divided by the node weights: `(1/2)(6 pi^2)^{2/3} rho^{2/3} - Phi_rho`.
pub fn ptf_gradient(rho: &RadialDensity) -> Result<Vec<f64>> {
    let phi = coulomb_potential(rho)?;
    let c = 5.0 / 3.0 * c_tf();
    Ok(rho
        .values()
        .iter()
        .zip(phi.values())
        .map(|(v, p)| c * v.powf(2.0 / 3.0) - p)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingCheck {
    pub lhs: f64,
    pub rhs: f64,
}

/// Compares the functional at `rho_N(x) = N^2 rho(N^{1/3} x)`, evaluated on the
/// correspondingly mapped grid, with `N^{7/3}` times its value at `rho`.
pub fn scaling_check(rho: &RadialDensity, n: f64) -> Result<ScalingCheck> {
    if !(n >= 1.0) {
        return Err(Error::OutOfRange {
            name: "N",
            value: n,
            range: "[1, inf)",
        });
    }
    let base = ptf_energy(rho)?.total;
    if n == 1.0 {
        return Ok(ScalingCheck {
            lhs: base,
            rhs: base,
        });
    }
    let lhs = ptf_energy(&rho.particle_scaled(n))?.total;
    Ok(ScalingCheck {
        lhs,
        rhs: n.powf(7.0 / 3.0) * base,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtfBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Analytic bracket for the infimum of the functional.
///
/// Lower: the Coulomb term is at most `(a_1/2) (int rho^{5/3})^{1/2}` for unit
/// mass, and `c_TF y - (a_1/2) sqrt(y)` is minimal at `sqrt(y) = a_1 / 4 c_TF`.
/// Upper: the best Gaussian. With `A = c_TF (3/5)^{3/2} / 2 pi` and
/// `B = 1 / 2 sqrt(pi)` the Gaussian of width `s` has energy
/// `A/s^2 - B/s`, minimal at `s = 2A/B`.
pub fn ptf_bracket() -> PtfBracket {
    let ctf = c_tf();
    let a1 = a_mu(1.0);
    let lower = -a1 * a1 / (16.0 * ctf);
    let (a, b) = gaussian_coefficients();
    PtfBracket {
        lower,
        upper: -b * b / (4.0 * a),
    }
}

/// Width of the best Gaussian trial density.
pub fn best_gaussian_width() -> f64 {
    let (a, b) = gaussian_coefficients();
    2.0 * a / b
}

fn gaussian_coefficients() -> (f64, f64) {
    (c_tf() * 0.6f64.powf(1.5) / (2.0 * PI), 0.5 / PI.sqrt())
}
