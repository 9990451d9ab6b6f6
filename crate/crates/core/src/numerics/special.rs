//! Special functions and the fixed constants that appear in the bounds.

use std::f64::consts::{PI, SQRT_2};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula for arguments below one half.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

// B_2k / (2k)!
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
];

/// Riemann zeta function for real `s != 1` by Euler-Maclaurin summation.
///
/// Accurate to roughly machine precision for `-6 < s < 10`, which covers
/// every use in the generalized trapezoid corrections.
pub fn zeta(s: f64) -> f64 {
    const N: usize = 16;
    let n = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2)
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += coeff * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    sum
}

/// `c_0 = 2^{3/4} pi`, the normalization of the Fröhlich form factor.
pub fn c0() -> f64 {
    2f64.powf(0.75) * PI
}

/// `c_mu = pi^{-mu/2} Gamma(mu/2)`.
pub fn c_mu(mu: f64) -> f64 {
    PI.powf(-mu / 2.0) * gamma(mu / 2.0)
}

/// Constant of the Hardy-Littlewood-Sobolev type bound
/// `D_mu(rho) <= a_mu |rho|_1^{2-5mu/6} |rho|_{5/3}^{5mu/6}`.
pub fn a_mu(mu: f64) -> f64 {
    let q = 6.0 / (5.0 * mu);
    (4.0 * PI / 3.0).powf(mu / 3.0) * q.powf(1.0 + mu / 3.0) * (q - 1.0).powf(-1.0 + mu / 2.0)
}

/// `I_inf = (sqrt 2 - 1) / sqrt pi`.
pub fn i_infinity() -> f64 {
    (SQRT_2 - 1.0) / PI.sqrt()
}

/// Lieb-Thirring constant for `-Delta/2`: `(3/10)(3 pi / 2)^{2/3}`.
pub fn c_lt() -> f64 {
    0.3 * (1.5 * PI).powf(2.0 / 3.0)
}

/// Thomas-Fermi kinetic constant `(3/10)(6 pi^2)^{2/3}`.
pub fn c_tf() -> f64 {
    0.3 * (6.0 * PI * PI).powf(2.0 / 3.0)
}

/// Default Lieb-Oxford constant.
pub const C_L_DEFAULT: f64 = 1.68;

/// The constants as one value, with the configurable Lieb-Oxford constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialConstants {
    pub c0: f64,
    pub i_infinity: f64,
    pub c_lt: f64,
    pub c_tf: f64,
    pub c_l: f64,
}

impl SpecialConstants {
    pub fn new(c_l: f64) -> Self {
        Self {
            c0: c0(),
            i_infinity: i_infinity(),
            c_lt: c_lt(),
            c_tf: c_tf(),
            c_l,
        }
    }

    pub fn c_mu(&self, mu: f64) -> f64 {
        c_mu(mu)
    }

    pub fn a_mu(&self, mu: f64) -> f64 {
        a_mu(mu)
    }
}

impl Default for SpecialConstants {
    fn default() -> Self {
        Self::new(C_L_DEFAULT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5), PI.sqrt() / 2.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.1), 9.513_507_698_668_732, max_relative = 1e-12);
    }

    #[test]
    fn zeta_reference_values() {
        assert_relative_eq!(zeta(2.0), PI * PI / 6.0, max_relative = 1e-13);
        assert_relative_eq!(zeta(0.0), -0.5, max_relative = 1e-13);
        assert_relative_eq!(zeta(-1.0), -1.0 / 12.0, max_relative = 1e-12);
        assert!(zeta(-2.0).abs() < 1e-13);
        assert_relative_eq!(zeta(-3.0), 1.0 / 120.0, max_relative = 1e-11);
        assert_relative_eq!(zeta(0.5), -1.460_354_508_809_586_8, max_relative = 1e-12);
        assert_relative_eq!(zeta(4.0), PI.powi(4) / 90.0, max_relative = 1e-13);
    }

    #[test]
    fn c_mu_at_one_is_exactly_one() {
        assert_relative_eq!(c_mu(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(c_mu(2.0), 1.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn named_constants() {
        assert_relative_eq!(c0() * c0(), 2.0 * SQRT_2 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(4.0 * PI / (c0() * c0()), SQRT_2 / PI, max_relative = 1e-14);
        assert_relative_eq!(i_infinity(), 0.233_694_977_255_109_07, max_relative = 1e-14);
        assert_relative_eq!(c_tf(), 4.557_799_872_345_597, max_relative = 1e-12);
    }
}
