use std::f64::consts::PI;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Uniform,
    Logarithmic,
}

impl GridKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GridKind::Uniform => "uniform",
            GridKind::Logarithmic => "logarithmic",
        }
    }
}

impl std::str::FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GridKind::Uniform),
            "logarithmic" | "log" => Ok(GridKind::Logarithmic),
            other => Err(Error::InvalidGrid(format!("unknown grid kind '{other}'"))),
        }
    }
}

/// Radial grid `r_i = r(x_i)` over an equispaced computational coordinate
/// `x_i = x_0 + i h`.
///
/// Weights realize `int_0^inf 4 pi r^2 f(r) dr` as the trapezoid rule in `x`,
/// which is spectrally accurate for smooth integrands that vanish at both
/// ends. `jacobian` holds `dr/dx` at every node; it is needed by the singular
/// kernel corrections in [`super::coulomb_potential`] and [`super::riesz_energy`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    jacobian: Vec<f64>,
    spacing: f64,
    kind: GridKind,
    tolerance: f64,
}

impl RadialGrid {
    /// Default grid: logarithmic, 2000 nodes on `[1e-4, 50]`, tolerance 1e-6.
    pub fn default_log() -> Self {
        Self::logarithmic(2000, 1e-4, 50.0, 1e-6).expect("default grid passes its self-test")
    }

    pub fn logarithmic(count: usize, r_min: f64, r_max: f64, tolerance: f64) -> Result<Self> {
        check_range(count, r_min, r_max)?;
        let spacing = (r_max / r_min).ln() / (count - 1) as f64;
        let nodes: Vec<f64> = (0..count)
            .map(|i| r_min * (i as f64 * spacing).exp())
            .collect();
        let jacobian = nodes.clone();
        let weights = nodes
            .iter()
            .map(|r| 4.0 * PI * r * r * r * spacing)
            .collect();
        Self::checked(
            nodes,
            weights,
            jacobian,
            spacing,
            GridKind::Logarithmic,
            tolerance,
        )
    }

    /// Uniform grid `r_i = i h`, `i = 1..=count`, `h = r_max / count`. The
    /// origin is an implicit node where every radial integrand vanishes.
    pub fn uniform(count: usize, r_max: f64, tolerance: f64) -> Result<Self> {
        check_range(count, r_max / count as f64, r_max)?;
        let spacing = r_max / count as f64;
        let nodes: Vec<f64> = (1..=count).map(|i| i as f64 * spacing).collect();
        let jacobian = vec![1.0; count];
        let mut weights: Vec<f64> = nodes.iter().map(|r| 4.0 * PI * r * r * spacing).collect();
        weights[count - 1] *= 0.5;
        Self::checked(
            nodes,
            weights,
            jacobian,
            spacing,
            GridKind::Uniform,
            tolerance,
        )
    }

    pub fn new(
        kind: GridKind,
        count: usize,
        r_min: f64,
        r_max: f64,
        tolerance: f64,
    ) -> Result<Self> {
        match kind {
            GridKind::Logarithmic => Self::logarithmic(count, r_min, r_max, tolerance),
            GridKind::Uniform => Self::uniform(count, r_max, tolerance),
        }
    }

    fn checked(
        nodes: Vec<f64>,
        weights: Vec<f64>,
        jacobian: Vec<f64>,
        spacing: f64,
        kind: GridKind,
        tolerance: f64,
    ) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        let grid = Self {
            nodes,
            weights,
            jacobian,
            spacing,
            kind,
            tolerance,
        };
        // refinement self-test against int e^{-r^2/s^2} d^3x = pi^{3/2} s^3;
        // s = 1 unless the grid is too short to hold the unit Gaussian
        let s = (grid.r_max() / 6.0).min(1.0);
        let gauss = grid.integrate(|r| (-(r / s).powi(2)).exp());
        let error = (gauss / (PI.powf(1.5) * s.powi(3)) - 1.0).abs();
        if error > tolerance {
            return Err(Error::GridTooCoarse {
                what: "gaussian self-test",
                error,
                tolerance,
            });
        }
        Ok(grid)
    }

    /// The grid mapped by `r -> factor * r`. Weights scale by `factor^3`.
    pub fn scaled(&self, factor: f64) -> Self {
        let f3 = factor * factor * factor;
        Self {
            nodes: self.nodes.iter().map(|r| r * factor).collect(),
            weights: self.weights.iter().map(|w| w * f3).collect(),
            jacobian: self.jacobian.iter().map(|j| j * factor).collect(),
            spacing: self.spacing,
            kind: self.kind,
            tolerance: self.tolerance,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, w)| w * f(r))
            .sum()
    }

    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn jacobian(&self) -> &[f64] {
        &self.jacobian
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().expect("grid is nonempty")
    }

    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.len() == other.len()
            && self.kind == other.kind
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(a, b)| (a - b).abs() <= 1e-14 * a.abs())
    }
}

fn check_range(count: usize, r_min: f64, r_max: f64) -> Result<()> {
    if count < 8 {
        return Err(Error::InvalidGrid(format!(
            "need at least 8 nodes, got {count}"
        )));
    }
    if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_max > r_min) {
        return Err(Error::InvalidGrid(format!(
            "bad radial range [{r_min}, {r_max}]"
        )));
    }
    Ok(())
}
