use std::f64::consts::PI;
use std::sync::Arc;

use super::{RadialDensity, RadialGrid};
use crate::{Error, Result};

/// Radial potential sampled on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPotential {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialPotential {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fraction of the mass allowed beyond 90% of the outermost radius before a
/// density is considered truncated by the grid.
const CONTAINMENT: f64 = 1e-10;

/// Newton potential `Phi(r) = int rho(y) / max(r, |y|) dy` of a radial
/// density.
///
/// The shell kernel `1/max(r, s)` has a kink at `s = r`; with the kink on a
/// node the trapezoid sum overshoots by `(pi/3) h^2 (dr/dx)^2 rho(r)`, which is
/// removed here. The resulting bilinear form `sum_i w_i rho_i Phi[sigma]_i` is
/// exactly symmetric.
pub fn coulomb_potential(rho: &RadialDensity) -> Result<RadialPotential> {
    check_contained(rho)?;
    Ok(RadialPotential {
        grid: rho.shared_grid(),
        values: potential_values(rho.grid(), rho.values()),
    })
}

pub(crate) fn potential_values(grid: &RadialGrid, values: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let r = grid.nodes();
    let w = grid.weights();
    let jac = grid.jacobian();
    let h = grid.spacing();
    let mut out = vec![0.0; n];
    // inner[i] = sum_{j<=i} w_j v_j ; outer[i] = sum_{j>i} w_j v_j / r_j
    let mut inner = 0.0;
    for i in 0..n {
        inner += w[i] * values[i];
        out[i] = inner / r[i];
    }
    let mut outer = 0.0;
    for i in (0..n).rev() {
        out[i] += outer - PI / 3.0 * h * h * jac[i] * jac[i] * values[i];
        outer += w[i] * values[i] / r[i];
    }
    out
}

fn check_contained(rho: &RadialDensity) -> Result<()> {
    let n = rho.grid().len();
    let start = rho
        .grid()
        .nodes()
        .partition_point(|r| *r < 0.9 * rho.grid().r_max());
    let w = rho.grid().weights();
    let tail: f64 = (start..n).map(|i| w[i] * rho.values()[i]).sum();
    let total = rho.mass();
    if total > 0.0 && tail > CONTAINMENT * total {
        return Err(Error::GridTooCoarse {
            what: "Coulomb potential (density reaches the grid boundary)",
            error: tail / total,
            tolerance: CONTAINMENT,
        });
    }
    Ok(())
}

/// `int int rho(x) sigma(y) / |x - y| dx dy`, without the factor 1/2.
pub fn coulomb_energy(rho: &RadialDensity, sigma: &RadialDensity) -> Result<f64> {
    if !rho.grid().same_as(sigma.grid()) {
        return Err(Error::IncompatibleGrids);
    }
    let phi = coulomb_potential(sigma)?;
    Ok(rho.grid().integrate_values(
        &rho.values()
            .iter()
            .zip(phi.values())
            .map(|(a, b)| a * b)
            .collect::<Vec<_>>(),
    ))
}
