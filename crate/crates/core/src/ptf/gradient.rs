//! Projected gradient descent on the discretized functional.

use std::sync::Arc;

use super::{ptf_energy, ptf_gradient, PtfSolution, SolverMethod};
use crate::numerics::{RadialDensity, RadialGrid};
use crate::{Error, Result};

/// Energy decrease per iteration below which the descent stops.
pub const STOP_DECREASE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 50_000;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-16;

/// Minimizes the discrete functional from `init` (unit mass).
///
/// Each iteration moves along minus the gradient with the current Lagrange
/// estimate subtracted, clips negative values to zero and then rescales to
/// unit mass. The step starts at twice the last accepted one and is halved
/// until the Armijo condition holds on the projected point.
///
/// The gradient is scaled node by node with `(rho / max rho)^{1/3}`, the
/// inverse curvature of the `rho^{5/3}` term. Without it the nodes near the
/// edge of the support, where that curvature diverges, force tiny steps and
/// the descent stalls long before the 1e-12 stopping rule means convergence.
/// The Lagrange estimate is the mean of the gradient over the support with
/// the same scaling as weight, so a step conserves mass before clipping.
pub fn minimize_direct(
    grid: Arc<RadialGrid>,
    init: &RadialDensity,
    max_iters: usize,
    step: f64,
) -> Result<PtfSolution> {
    if !grid.same_as(init.grid()) {
        return Err(Error::IncompatibleGrids);
    }
    if (init.mass() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDensity(format!(
            "initial density has mass {}, expected 1",
            init.mass()
        )));
    }
    if !(step > 0.0) {
        return Err(Error::OutOfRange {
            name: "step",
            value: step,
            range: "(0, inf)",
        });
    }
    let w = grid.weights().to_vec();
    let mut rho = init.clone();
    let mut energy = ptf_energy(&rho)?;
    let mut t = step;
    for iteration in 0..max_iters {
        let g = ptf_gradient(&rho)?;
        let v = rho.values();
        let peak = v.iter().cloned().fold(0.0, f64::max);
        let scale: Vec<f64> = v
            .iter()
            .map(|x| ((x + 1e-12 * peak) / peak).cbrt())
            .collect();
        let (num, den) = v
            .iter()
            .zip(&g)
            .zip(&w)
            .zip(&scale)
            .filter(|(((v, _), _), _)| **v > 0.0)
            .fold((0.0, 0.0), |(n, d), (((_, g), w), s)| {
                (n + w * s * g, d + w * s)
            });
        let lagrange = num / den;
        let direction: Vec<f64> = g
            .iter()
            .zip(&scale)
            .map(|(g, s)| s * (g - lagrange))
            .collect();

        t = (2.0 * t).min(1e3 * step);
        let accepted = loop {
            let trial: Vec<f64> = v
                .iter()
                .zip(&direction)
                .map(|(v, d)| (v - t * d).max(0.0))
                .collect();
            let candidate = RadialDensity::new(rho.shared_grid(), trial)?.normalized(1.0)?;
            let e = ptf_energy(&candidate)?;
            let moved: f64 = candidate
                .values()
                .iter()
                .zip(v)
                .zip(&w)
                .map(|((a, b), w)| w * (a - b) * (a - b))
                .sum();
            if e.total <= energy.total - ARMIJO * moved / t {
                break Some((candidate, e));
            }
            t /= 2.0;
            if t < MIN_STEP * step {
                break None;
            }
        };
        match accepted {
            Some((candidate, e)) => {
                let decrease = energy.total - e.total;
                rho = candidate;
                energy = e;
                if decrease < STOP_DECREASE {
                    return Ok(finish(
                        rho,
                        energy.kinetic,
                        energy.coulomb,
                        lagrange,
                        iteration + 1,
                    ));
                }
            }
            None => {
                // no admissible step: a stationary point up to roundoff, or a
                // failure if the gradient is not small
                let slope: f64 = direction
                    .iter()
                    .zip(v)
                    .zip(&w)
                    .map(|((d, v), w)| if *v > 0.0 { w * d * d } else { 0.0 })
                    .sum();
                if slope.sqrt() < 1e-6 {
                    return Ok(finish(
                        rho,
                        energy.kinetic,
                        energy.coulomb,
                        lagrange,
                        iteration + 1,
                    ));
                }
                return Err(Error::ConvergenceFailure {
                    iterations: iteration + 1,
                    energy: energy.total,
                    reason: "energy does not decrease under the minimal step",
                    iterate: Box::new(rho),
                });
            }
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iters,
        energy: energy.total,
        reason: "iteration limit reached",
        iterate: Box::new(rho),
    })
}

fn finish(
    rho: RadialDensity,
    kinetic: f64,
    coulomb: f64,
    lagrange: f64,
    iterations: usize,
) -> PtfSolution {
    // on the support c rho^{2/3} - Phi = mu_c, so the Lagrange estimate is mu_c
    PtfSolution::assemble(
        rho,
        kinetic,
        coulomb,
        lagrange,
        SolverMethod::Gradient,
        iterations,
    )
}
