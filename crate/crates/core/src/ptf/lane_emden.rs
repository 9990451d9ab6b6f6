//! Lane-Emden equation of index 3/2,
//! `theta'' + (2/xi) theta' + theta^{3/2} = 0`, `theta(0) = 1`, `theta'(0) = 0`.

use crate::numerics::quad::gauss_legendre;
use crate::{Error, Result};

const INDEX: f64 = 1.5;
const XI_MAX: f64 = 20.0;

/// Numerical solution up to the first zero `xi_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneEmdenProfile {
    /// `(xi, theta, theta')` at every accepted step, ending at `xi_1`.
    samples: Vec<[f64; 3]>,
    first_zero: f64,
    slope_at_zero: f64,
    /// `int_0^{xi_1} theta^{5/2} xi^2 d xi`
    kinetic_integral: f64,
    /// `int_0^{xi_1} theta^{3/2} xi^2 d xi`, equal to `-xi_1^2 theta'(xi_1)`
    mass_integral: f64,
}

impl LaneEmdenProfile {
    pub fn first_zero(&self) -> f64 {
        self.first_zero
    }

    pub fn slope_at_zero(&self) -> f64 {
        self.slope_at_zero
    }

    /// `-xi_1^2 theta'(xi_1)`.
    pub fn mass_constant(&self) -> f64 {
        -self.first_zero * self.first_zero * self.slope_at_zero
    }

    pub fn mass_integral(&self) -> f64 {
        self.mass_integral
    }

    pub fn kinetic_integral(&self) -> f64 {
        self.kinetic_integral
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples.iter().map(|s| (s[0], s[1]))
    }

    /// `theta(xi)` by cubic Hermite interpolation between steps; zero beyond
    /// `xi_1`.
    pub fn theta(&self, xi: f64) -> f64 {
        if xi >= self.first_zero {
            return 0.0;
        }
        if xi <= self.samples[0][0] {
            return series(xi).0;
        }
        let k = self.samples.partition_point(|s| s[0] <= xi) - 1;
        let [x0, y0, d0] = self.samples[k];
        let [x1, y1, d1] = self.samples[k + 1];
        let h = x1 - x0;
        let t = (xi - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * d1;
        value.max(0.0)
    }
}

/// Power series about the origin: `(theta, theta')`.
fn series(xi: f64) -> (f64, f64) {
    let n = INDEX;
    let c4 = n / 120.0;
    let c6 = -n * (8.0 * n - 5.0) / 15_120.0;
    let x2 = xi * xi;
    (
        1.0 - x2 / 6.0 + c4 * x2 * x2 + c6 * x2 * x2 * x2,
        -xi / 3.0 + 4.0 * c4 * x2 * xi + 6.0 * c6 * x2 * x2 * xi,
    )
}

// state: theta, theta', int theta^{5/2} xi^2, int theta^{3/2} xi^2
type State = [f64; 4];

fn rhs(xi: f64, y: &State) -> State {
    let t = y[0].max(0.0);
    let t32 = t * t.sqrt();
    [
        y[1],
        -t32 - 2.0 * y[1] / xi,
        t32 * t * xi * xi,
        t32 * xi * xi,
    ]
}

fn rk4(xi: f64, y: &State, h: f64) -> State {
    let add = |a: &State, b: &State, s: f64| -> State { std::array::from_fn(|i| a[i] + s * b[i]) };
    let k1 = rhs(xi, y);
    let k2 = rhs(xi + h / 2.0, &add(y, &k1, h / 2.0));
    let k3 = rhs(xi + h / 2.0, &add(y, &k2, h / 2.0));
    let k4 = rhs(xi + h, &add(y, &k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from the series start with fixed-step RK4 (step
/// `min(1e-2, tol^{1/4} / 2)`) and locates the first zero by bracketing it
/// between two steps and solving for the partial step that lands on it.
pub fn solve_lane_emden(tolerance: f64) -> Result<LaneEmdenProfile> {
    if !(tolerance > 0.0) {
        return Err(Error::OutOfRange {
            name: "tolerance",
            value: tolerance,
            range: "(0, inf)",
        });
    }
    let h = (0.5 * tolerance.powf(0.25)).min(1e-2);
    integrate_with_step(h)
}

pub(crate) fn integrate_with_step(h: f64) -> Result<LaneEmdenProfile> {
    // the series is good to ~1e-13 at 0.1 and keeps RK4 away from the 2/xi term
    let xi0 = 0.1;
    let (t0, d0) = series(xi0);
    let (nodes, weights) = gauss_legendre(10);
    let start_integral = |p: f64| -> f64 {
        nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| {
                let xi = 0.5 * xi0 * (x + 1.0);
                0.5 * xi0 * w * series(xi).0.powf(p) * xi * xi
            })
            .sum()
    };
    let mut y: State = [t0, d0, start_integral(2.5), start_integral(1.5)];
    let mut xi = xi0;
    let mut samples = vec![[xi, y[0], y[1]]];
    while xi < XI_MAX {
        let next = rk4(xi, &y, h);
        if next[0] <= 0.0 {
            let s = partial_step_to_zero(xi, &y, h);
            let end = rk4(xi, &y, s);
            let first_zero = xi + s;
            samples.push([first_zero, 0.0, end[1]]);
            return Ok(LaneEmdenProfile {
                samples,
                first_zero,
                slope_at_zero: end[1],
                kinetic_integral: end[2],
                mass_integral: end[3],
            });
        }
        y = next;
        xi += h;
        samples.push([xi, y[0], y[1]]);
    }
    Err(Error::NoLaneEmdenZero { xi_max: XI_MAX })
}

/// Step length `s` in `(0, h]` with `theta(xi + s) = 0` along the RK4 map,
/// by the Illinois variant of regula falsi.
fn partial_step_to_zero(xi: f64, y: &State, h: f64) -> f64 {
    let (mut a, mut fa) = (0.0, y[0]);
    let (mut b, mut fb) = (h, rk4(xi, y, h)[0]);
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = rk4(xi, y, c)[0];
        if fc == 0.0 || (b - a).abs() < 1e-16 * h.max(xi) {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_zero_and_mass_constant() {
        let p = solve_lane_emden(1e-12).unwrap();
        assert!((p.first_zero() - 3.653_75).abs() < 1e-4);
        assert!((p.mass_constant() - 2.714_06).abs() < 1e-4);
        assert_relative_eq!(p.mass_integral(), p.mass_constant(), max_relative = 1e-9);
    }

    #[test]
    fn halving_the_step_changes_little() {
        let a = integrate_with_step(1e-2).unwrap();
        let b = integrate_with_step(5e-3).unwrap();
        let c = integrate_with_step(2.5e-3).unwrap();
        // fourth order: successive differences shrink by about 16
        let d1 = (a.first_zero() - b.first_zero()).abs();
        let d2 = (b.first_zero() - c.first_zero()).abs();
        assert!(d2 < d1 / 8.0, "{d1} {d2}");
        assert!(d2 < 1e-9);
    }

    #[test]
    fn profile_shape() {
        let p = solve_lane_emden(1e-10).unwrap();
        assert_eq!(p.theta(0.0), 1.0);
        let mut last = 1.0;
        for i in 1..400 {
            let xi = i as f64 * p.first_zero() / 400.0;
            let t = p.theta(xi);
            assert!(t < last);
            if xi < 0.5 {
                assert!(t >= 1.0 - xi * xi / 6.0);
            }
            last = t;
        }
        assert_eq!(p.theta(p.first_zero() + 1e-9), 0.0);
    }
}
