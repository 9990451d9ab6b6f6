use std::f64::consts::PI;

use super::special::{a_mu, zeta};
use super::{RadialDensity, Spectrum};
use crate::{Error, Result};

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.2) {
        return Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            range: "(0, 6/5)",
        });
    }
    Ok(())
}

/// Angular average of `|x - y|^{-mu}` over spheres of radii `r` and `s`:
/// `[(r + s)^a - |r - s|^a] / (2 a r s)` with `a = 2 - mu`.
pub fn shell_kernel(mu: f64, r: f64, s: f64) -> f64 {
    let a = 2.0 - mu;
    ((r + s).powf(a) - (r - s).abs().powf(a)) / (2.0 * a * r * s)
}

/// Real-space value of `int int rho(x) rho(y) |x - y|^{-mu} dx dy` as a double
/// radial sum over the shell kernel.
///
/// In the computational coordinate the kernel has a `|x - x_i|^a` cusp on the
/// diagonal; the trapezoid excess `2 zeta(-a) h^{1+a}` times the cusp
/// coefficient is removed node by node.
pub fn riesz_real_space(rho: &RadialDensity, mu: f64) -> Result<f64> {
    Ok(riesz_real_space_many(rho, &[mu])?[0])
}

/// [`riesz_real_space`] for several exponents in one pass over the node pairs.
pub fn riesz_real_space_many(rho: &RadialDensity, mus: &[f64]) -> Result<Vec<f64>> {
    for &mu in mus {
        check_mu(mu)?;
    }
    let grid = rho.grid();
    let r = grid.nodes();
    let w = grid.weights();
    let jac = grid.jacobian();
    let h = grid.spacing();
    let v = rho.values();
    let a: Vec<f64> = mus.iter().map(|mu| 2.0 - mu).collect();
    let active: Vec<usize> = (0..grid.len()).filter(|&i| v[i] != 0.0).collect();
    let cusp: Vec<f64> = a
        .iter()
        .map(|&a| 4.0 * PI * zeta(-a) * h.powf(1.0 + a) / a)
        .collect();
    // shell kernel times 2 a r s, summed against w v / s
    let mut row = vec![0.0; mus.len()];
    let mut total = vec![0.0; mus.len()];
    for (n, &i) in active.iter().enumerate() {
        let ln_diag = (2.0 * r[i]).ln();
        for (acc, &a) in row.iter_mut().zip(&a) {
            *acc = 0.5 * w[i] * v[i] / r[i] * (a * ln_diag).exp();
        }
        for &j in &active[n + 1..] {
            let f = w[j] * v[j] / r[j];
            let (lp, lm) = ((r[i] + r[j]).ln(), (r[j] - r[i]).abs().ln());
            for (acc, &a) in row.iter_mut().zip(&a) {
                *acc += f * ((a * lp).exp() - (a * lm).exp());
            }
        }
        for k in 0..mus.len() {
            total[k] += 2.0 * w[i] * v[i] * row[k] / (2.0 * a[k] * r[i]);
            total[k] += w[i] * v[i] * cusp[k] * jac[i].powf(1.0 + a[k]) * v[i];
        }
    }
    Ok(total)
}

/// Riesz energy by the momentum-space formula, cross-checked against the
/// real-space double sum.
///
/// The two values must agree to the grid's declared tolerance; the
/// momentum-space value is returned.
pub fn riesz_energy(rho: &RadialDensity, mu: f64) -> Result<f64> {
    RieszEvaluator::new(rho).energy(mu)
}

/// Riesz energies of one density for several exponents, sharing its
/// transform.
#[derive(Debug, Clone)]
pub struct RieszEvaluator<'a> {
    rho: &'a RadialDensity,
    spectrum: Spectrum,
}

impl<'a> RieszEvaluator<'a> {
    pub fn new(rho: &'a RadialDensity) -> Self {
        Self {
            rho,
            spectrum: Spectrum::new(rho),
        }
    }

    pub fn energy(&self, mu: f64) -> Result<f64> {
        Ok(self.energies(&[mu])?[0])
    }

    pub fn energies(&self, mus: &[f64]) -> Result<Vec<f64>> {
        let real = riesz_real_space_many(self.rho, mus)?;
        let tolerance = self.rho.grid().tolerance();
        mus.iter()
            .zip(real)
            .map(|(&mu, real_space)| {
                let fourier = self.spectrum.riesz(mu);
                let scale = fourier.abs().max(real_space.abs());
                if scale > 0.0 && (fourier - real_space).abs() > tolerance * scale {
                    return Err(Error::RieszDisagreement {
                        real_space,
                        fourier,
                        tolerance,
                    });
                }
                Ok(fourier)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlsCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the Riesz energy with
/// `a_mu |rho|_1^{2 - 5mu/6} |rho|_{5/3}^{5mu/6}`; the comparison allows the
/// grid tolerance as slack.
pub fn hls_check(rho: &RadialDensity, mu: f64) -> Result<HlsCheck> {
    Ok(hls_checks(rho, &[mu])?[0])
}

/// [`hls_check`] for several exponents.
pub fn hls_checks(rho: &RadialDensity, mus: &[f64]) -> Result<Vec<HlsCheck>> {
    for &mu in mus {
        check_mu(mu)?;
    }
    if rho.mass() == 0.0 {
        return Ok(vec![
            HlsCheck {
                lhs: 0.0,
                rhs: 0.0,
                holds: true
            };
            mus.len()
        ]);
    }
    let lhs = RieszEvaluator::new(rho).energies(mus)?;
    let slack = 1.0 + rho.grid().tolerance();
    Ok(mus
        .iter()
        .zip(lhs)
        .map(|(&mu, lhs)| {
            let rhs = a_mu(mu)
                * rho.mass().powf(2.0 - 5.0 * mu / 6.0)
                * rho.norm_5_3().powf(5.0 * mu / 6.0);
            HlsCheck {
                lhs,
                rhs,
                holds: lhs <= rhs * slack,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{coulomb_energy, RadialGrid};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    #[test]
    fn kernel_at_unit_power_is_inverse_max() {
        assert_relative_eq!(shell_kernel(1.0, 0.3, 2.0), 0.5, max_relative = 1e-14);
        assert_relative_eq!(shell_kernel(1.0, 3.0, 2.0), 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn real_space_matches_coulomb_at_unit_power() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian_mixture(g, &[(0.4, 0.6), (0.6, 1.7)]).unwrap();
        let rs = riesz_real_space(&rho, 1.0).unwrap();
        assert_relative_eq!(
            rs,
            coulomb_energy(&rho, &rho).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn gaussian_riesz_both_routes() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian(g, 1.0, 1.0).unwrap();
        let gamma = crate::numerics::special::gamma;
        for mu in [0.1, 0.5, 1.0, 1.1, 37.0 / 31.0] {
            let exact = 2f64.powf(-mu) * gamma((3.0 - mu) / 2.0) / gamma(1.5);
            assert_relative_eq!(
                riesz_real_space(&rho, mu).unwrap(),
                exact,
                max_relative = 1e-9
            );
            assert_relative_eq!(riesz_energy(&rho, mu).unwrap(), exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn uniform_ball_at_the_default_exponent() {
        // 30-digit two-dimensional quadrature of the shell kernel over the unit ball
        let reference = 1.291_903_765_602_256_5;
        let g = Arc::new(RadialGrid::uniform(4000, 2.0, 1e-4).unwrap());
        let ball = RadialDensity::uniform_ball(g, 1.0, 1.0).unwrap();
        let mu = 37.0 / 31.0;
        assert_relative_eq!(
            riesz_real_space(&ball, mu).unwrap(),
            reference,
            max_relative = 1e-5
        );
        assert_relative_eq!(
            riesz_energy(&ball, mu).unwrap(),
            reference,
            max_relative = 1e-4
        );
    }

    #[test]
    fn small_exponent_tends_to_mass_squared() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian(g, 1.0, 0.8).unwrap();
        let e = riesz_energy(&rho, 1e-3).unwrap();
        assert!((e - 1.0).abs() < 2e-3);
    }

    #[test]
    fn exponent_out_of_range() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian(g, 1.0, 1.0).unwrap();
        assert!(matches!(
            riesz_energy(&rho, 1.2),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            hls_check(&rho, 0.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            hls_checks(&rho, &[0.5, 1.3]),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn batched_exponents_match_single_ones() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian_mixture(g, &[(0.3, 0.5), (0.7, 2.2)]).unwrap();
        let mus = [0.2, 0.9, 37.0 / 31.0];
        let many = riesz_real_space_many(&rho, &mus).unwrap();
        for (mu, value) in mus.iter().zip(many) {
            assert_relative_eq!(
                value,
                riesz_real_space(&rho, *mu).unwrap(),
                max_relative = 1e-14
            );
        }
        let checks = hls_checks(&rho, &mus).unwrap();
        assert_eq!(checks[1], hls_check(&rho, 0.9).unwrap());
    }

    #[test]
    fn hls_for_unit_gaussian() {
        let g = Arc::new(RadialGrid::default_log());
        let rho = RadialDensity::gaussian(g, 1.0, 1.0).unwrap();
        let c = hls_check(&rho, 1.0).unwrap();
        assert_relative_eq!(c.lhs, 1.0 / PI.sqrt(), max_relative = 1e-9);
        let norm = ((2.0 * PI).recip() * 0.6f64.powf(1.5)).powf(0.6);
        assert_relative_eq!(
            c.rhs,
            a_mu(1.0) * norm.powf(5.0 / 6.0),
            max_relative = 1e-10
        );
        assert!(c.holds);
        let z = RadialDensity::zero(rho.shared_grid());
        assert_eq!(
            hls_check(&z, 0.7).unwrap(),
            HlsCheck {
                lhs: 0.0,
                rhs: 0.0,
                holds: true
            }
        );
    }
}
