use std::f64::consts::PI;
use std::sync::Arc;

use super::RadialGrid;
use crate::{Error, Result};

/// Nonnegative spherically symmetric density sampled on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensity {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    mass: f64,
}

impl RadialDensity {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidDensity(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidDensity(format!("value {v} at node {i}")));
        }
        let mass = grid.integrate_values(&values);
        Ok(Self { grid, values, mass })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
            mass: 0.0,
        }
    }

    /// Gaussian `mass (2 pi sigma^2)^{-3/2} e^{-r^2 / 2 sigma^2}`, whose
    /// transform is `mass e^{-sigma^2 k^2 / 2}`.
    pub fn gaussian(grid: Arc<RadialGrid>, mass: f64, sigma: f64) -> Result<Self> {
        Self::gaussian_mixture(grid, &[(mass, sigma)])
    }

    pub fn gaussian_mixture(grid: Arc<RadialGrid>, components: &[(f64, f64)]) -> Result<Self> {
        Self::from_fn(grid, |r| {
            components
                .iter()
                .map(|&(m, s)| gaussian_value(m, s, r))
                .sum()
        })
    }

    /// Uniform ball of radius `radius`. A node that falls on the surface
    /// carries half the interior value; the amplitude is then fixed so that
    /// the grid mass equals `mass`.
    pub fn uniform_ball(grid: Arc<RadialGrid>, radius: f64, mass: f64) -> Result<Self> {
        let shape: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| {
                if (r - radius).abs() <= 1e-12 * radius {
                    0.5
                } else if r < radius {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let raw = grid.integrate_values(&shape);
        if raw <= 0.0 {
            return Err(Error::InvalidDensity(format!(
                "ball of radius {radius} contains no node"
            )));
        }
        let amplitude = mass / raw;
        Self::new(grid, shape.into_iter().map(|s| s * amplitude).collect())
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `int rho^p dx`.
    pub fn integral_of_power(&self, p: f64) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| if *v > 0.0 { w * v.powf(p) } else { 0.0 })
            .sum()
    }

    /// `||rho||_{5/3}`.
    pub fn norm_5_3(&self) -> f64 {
        self.integral_of_power(5.0 / 3.0).powf(0.6)
    }

    /// `int |x|^2 rho dx`.
    pub fn second_moment(&self) -> f64 {
        self.grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.values)
            .map(|((r, w), v)| w * r * r * v)
            .sum()
    }

    /// Radius beyond which the density carries at most `fraction` of its mass.
    pub fn support_radius(&self, fraction: f64) -> f64 {
        let mut tail = 0.0;
        let limit = fraction * self.mass;
        for (i, (w, v)) in self
            .grid
            .weights()
            .iter()
            .zip(&self.values)
            .enumerate()
            .rev()
        {
            tail += w * v;
            if tail > limit {
                return self.grid.nodes()[(i + 1).min(self.grid.len() - 1)];
            }
        }
        self.grid.nodes()[0]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * factor).collect(),
            mass: self.mass * factor,
        }
    }

    pub fn normalized(&self, mass: f64) -> Result<Self> {
        if self.mass <= 0.0 {
            return Err(Error::InvalidDensity(
                "cannot normalize a zero density".into(),
            ));
        }
        Ok(self.scaled(mass / self.mass))
    }

    /// `rho_R(x) = R^{-3} rho(x / R)` on the grid mapped by `r -> R r`.
    pub fn dilated(&self, radius_factor: f64) -> Self {
        let inv3 = radius_factor.powi(-3);
        Self {
            grid: Arc::new(self.grid.scaled(radius_factor)),
            values: self.values.iter().map(|v| v * inv3).collect(),
            mass: self.mass,
        }
    }

    /// `rho_N(x) = N^2 rho(N^{1/3} x)` on the grid mapped by `r -> N^{-1/3} r`.
    pub fn particle_scaled(&self, n: f64) -> Self {
        let n2 = n * n;
        let grid = Arc::new(self.grid.scaled(n.powf(-1.0 / 3.0)));
        let values: Vec<f64> = self.values.iter().map(|v| v * n2).collect();
        let mass = grid.integrate_values(&values);
        Self { grid, values, mass }
    }
}

pub fn gaussian_value(mass: f64, sigma: f64, r: f64) -> f64 {
    mass * (2.0 * PI * sigma * sigma).powf(-1.5) * (-r * r / (2.0 * sigma * sigma)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Arc<RadialGrid> {
        Arc::new(RadialGrid::default_log())
    }

    #[test]
    fn gaussian_mass_and_norms() {
        let sigma = 1.3;
        let rho = RadialDensity::gaussian(grid(), 2.0, sigma).unwrap();
        assert_relative_eq!(rho.mass(), 2.0, max_relative = 1e-12);
        // int rho^{5/3} = m^{5/3} (2 pi sigma^2)^{-1} (3/5)^{3/2}
        let expected = 2f64.powf(5.0 / 3.0) / (2.0 * PI * sigma * sigma) * 0.6f64.powf(1.5);
        assert_relative_eq!(
            rho.integral_of_power(5.0 / 3.0),
            expected,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rho.second_moment(),
            2.0 * 3.0 * sigma * sigma,
            max_relative = 1e-12
        );
    }

    #[test]
    fn negative_values_rejected() {
        let g = grid();
        let mut v = vec![0.0; g.len()];
        v[3] = -1e-9;
        assert!(RadialDensity::new(g, v).is_err());
    }

    #[test]
    fn particle_scaling_multiplies_mass() {
        let rho = RadialDensity::gaussian(grid(), 1.0, 1.0).unwrap();
        let r8 = rho.particle_scaled(8.0);
        assert_relative_eq!(r8.mass(), 8.0, max_relative = 1e-12);
        let d = rho.dilated(3.0);
        assert_relative_eq!(d.mass(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ball_mass_is_exact() {
        let g = Arc::new(RadialGrid::uniform(1000, 2.0, 1e-8).unwrap());
        let ball = RadialDensity::uniform_ball(g, 1.0, 1.0).unwrap();
        assert_relative_eq!(ball.mass(), 1.0, max_relative = 1e-13);
    }
}
