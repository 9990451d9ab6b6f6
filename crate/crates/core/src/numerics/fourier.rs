use std::f64::consts::PI;
use std::sync::Arc;

use super::special::zeta;
use super::{RadialDensity, RadialGrid};
use crate::Result;

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `rho_hat(k) = int e^{-i k.x} rho(x) dx = (4 pi / k) int rho(r) r sin(kr) dr`.
/// At `k = 0` this is the mass.
pub fn radial_fourier(rho: &RadialDensity, k: f64) -> f64 {
    transform_values(rho.grid(), rho.values(), k)
}

fn transform_values(grid: &RadialGrid, values: &[f64], k: f64) -> f64 {
    grid.nodes()
        .iter()
        .zip(grid.weights())
        .zip(values)
        .filter(|(_, v)| **v != 0.0)
        .map(|((r, w), v)| w * v * sinc(k * r))
        .sum()
}

/// Samples of `rho_hat` on the uniform momentum grid `k_n = n dk`, `n >= 1`,
/// together with the low-order moments that fix the small-`k` behaviour.
///
/// The step is a small fraction of `pi / R` for the effective support radius
/// `R`; sampling stops once the transform has decayed below roundoff or the
/// radial grid can no longer resolve `sin(kr)` over the support.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dk: f64,
    values: Vec<f64>,
    mass: f64,
    second_moment: f64,
    fourth_moment: f64,
}

const MAX_SAMPLES: usize = 200_000;

impl Spectrum {
    pub fn new(rho: &RadialDensity) -> Self {
        let grid = rho.grid();
        let mass = rho.mass();
        let moment = |p: i32| -> f64 {
            grid.nodes()
                .iter()
                .zip(grid.weights())
                .zip(rho.values())
                .map(|((r, w), v)| w * v * r.powi(p))
                .sum()
        };
        let second_moment = moment(2);
        let fourth_moment = moment(4);
        if mass <= 0.0 {
            return Self {
                dk: 1.0,
                values: Vec::new(),
                mass,
                second_moment,
                fourth_moment,
            };
        }
        let radius = rho.support_radius(1e-13).max(grid.nodes()[0]);
        let dk = PI / (8.0 * radius);
        // Where `k h r'(u) > pi / 2` the grid cannot follow sin(kr); those nodes can
        // spoil the transform by at most sum w rho / (k r), which must stay
        // below `alias_limit`.
        let jac_step: Vec<f64> = grid.jacobian().iter().map(|j| j * grid.spacing()).collect();
        let mut tail = vec![0.0; grid.len() + 1];
        for i in (0..grid.len()).rev() {
            tail[i] = tail[i + 1] + grid.weights()[i] * rho.values()[i].abs() / grid.nodes()[i];
        }
        let alias_limit = 1e-10 * mass;
        let aliasing = |k: f64| {
            let first = match jac_step.iter().position(|s| k * s > 0.5 * PI) {
                Some(i) => i,
                None => return 0.0,
            };
            tail[first] / k
        };
        let floor = 1e-17 * mass * mass;
        let mut values = Vec::new();
        let mut quiet = 0usize;
        loop {
            let k = (values.len() + 1) as f64 * dk;
            if aliasing(k) > alias_limit || values.len() >= MAX_SAMPLES {
                break;
            }
            let v = transform_values(grid, rho.values(), k);
            values.push(v);
            quiet = if v * v <= floor { quiet + 1 } else { 0 };
            if quiet >= 32 {
                break;
            }
        }
        Self {
            dk,
            values,
            mass,
            second_moment,
            fourth_moment,
        }
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn k_max(&self) -> f64 {
        self.values.len() as f64 * self.dk
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `int_0^inf rho_hat(k)^2 k^a m(k) dk` for `a > -1`, where the multiplier
    /// `m` is even and smooth with `m(k) = 1 + m2 k^2 + m4 k^4 + ...`.
    ///
    /// The trapezoid sum over `k_n = n dk` misses the endpoint behaviour of
    /// `k^a`; the generalized Euler-Maclaurin terms through `dk^{5+a}` are
    /// removed using the moment expansion of `rho_hat^2` at the origin.
    fn weighted_square<M: Fn(f64) -> f64>(&self, a: f64, multiplier: M, m2: f64, m4: f64) -> f64 {
        let h = self.dk;
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(n, v)| {
                let k = (n + 1) as f64 * h;
                v * v * k.powf(a) * multiplier(k)
            })
            .sum::<f64>()
            * h;
        // rho_hat = m - M2 k^2/6 + M4 k^4/120 - ...
        let m = self.mass;
        let p0 = m * m;
        let p2 = -m * self.second_moment / 3.0;
        let p4 = self.second_moment * self.second_moment / 36.0 + m * self.fourth_moment / 60.0;
        let c0 = p0;
        let c2 = p2 + p0 * m2;
        let c4 = p4 + p2 * m2 + p0 * m4;
        let correction = zeta(-a) * c0 * h.powf(1.0 + a)
            + zeta(-a - 2.0) * c2 * h.powf(3.0 + a)
            + zeta(-a - 4.0) * c4 * h.powf(5.0 + a);
        sum - correction
    }

    /// `int int rho(x) rho(y) |x - y|^{-mu} dx dy` through
    /// `(2 pi)^{-mu} (c_{3-mu} / c_mu) int |rho_hat(k)|^2 |k|^{mu - 3} dk`.
    pub fn riesz(&self, mu: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let c = super::special::c_mu;
        (2.0 * PI).powf(-mu) * c(3.0 - mu) / c(mu)
            * 4.0
            * PI
            * self.weighted_square(mu - 1.0, |_| 1.0, 0.0, 0.0)
    }

    /// Coulomb energy `(1 / 2 pi^2) int |rho_hat|^2 / |k|^2 dk`, without the
    /// factor 1/2.
    pub fn coulomb(&self) -> f64 {
        self.coulomb_smoothed(0.0)
    }

    /// Coulomb energy of `rho * G_eps`, where `G_eps` is the centred Gaussian
    /// with transform `e^{-eps^2 k^2 / 2}`.
    pub fn coulomb_smoothed(&self, eps: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let e2 = eps * eps;
        2.0 / PI * self.weighted_square(0.0, |k| (-e2 * k * k).exp(), -e2, 0.5 * e2 * e2)
    }
}

/// Coulomb energy by the momentum-space formula, without the factor 1/2.
pub fn coulomb_energy_fourier(rho: &RadialDensity) -> f64 {
    Spectrum::new(rho).coulomb()
}

/// `rho * G_eps` on the grid of `rho`, by multiplying the transform with
/// `e^{-eps^2 k^2 / 2}` and transforming back.
pub fn gaussian_smoothed(rho: &RadialDensity, eps: f64) -> Result<RadialDensity> {
    gaussian_smoothed_with(rho, &Spectrum::new(rho), eps)
}

pub(crate) fn gaussian_smoothed_with(
    rho: &RadialDensity,
    spectrum: &Spectrum,
    eps: f64,
) -> Result<RadialDensity> {
    if eps == 0.0 {
        return Ok(rho.clone());
    }
    let grid: Arc<RadialGrid> = rho.shared_grid();
    let h = spectrum.dk;
    let damped: Vec<(f64, f64)> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let k = (n + 1) as f64 * h;
            (k, v * (-0.5 * eps * eps * k * k).exp() * k * k)
        })
        .take_while(|(k, _)| eps * eps * k * k < 80.0)
        .collect();
    let values = grid
        .nodes()
        .iter()
        .map(|&r| {
            let s: f64 = damped.iter().map(|(k, v)| v * sinc(k * r)).sum();
            (s * h / (2.0 * PI * PI)).max(0.0)
        })
        .collect();
    let smoothed = RadialDensity::new(grid, values)?;
    // the inverse transform is exact up to truncation; restore the mass
    smoothed.normalized(rho.mass())
}
