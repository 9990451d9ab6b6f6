//! Scalar integrals of the ultraviolet analysis: the Gaussian-cutoff
//! integral `I_R`, the Nelson self-energy `e_Lambda` and the smeared Coulomb
//! kernel.

use std::f64::consts::{PI, SQRT_2};

use super::quad::{integrate, integrate_to_infinity};
use super::special::c0;

/// `I_R = (sqrt 2 / pi) int_0^R (1 - e^{-s^2/4})^2 / s^2 ds`; `R = inf` is
/// allowed.
pub fn i_cutoff(radius: f64) -> f64 {
    assert!(radius >= 0.0, "i_cutoff needs R >= 0, got {radius}");
    let f = |s: f64| {
        if s < 1e-3 {
            // (1 - e^{-x})^2 / s^2 with x = s^2/4
            let x = s * s / 4.0;
            let y = x * (1.0 - x / 2.0 + x * x / 6.0);
            y * y / (s * s)
        } else {
            let y = (-s * s / 4.0).exp_m1();
            y * y / (s * s)
        }
    };
    let split = 40.0;
    let body = integrate(f, 0.0, radius.min(split), 1e-16, 1e-14).value;
    let tail = if radius <= split {
        0.0
    } else if radius.is_infinite() {
        // beyond s = 40 the integrand is 1/s^2 up to e^{-400}
        1.0 / split
    } else {
        1.0 / split - 1.0 / radius
    };
    SQRT_2 / PI * (body + tail)
}

/// Which normalization of the Nelson self-energy to use.
///
/// `Squared` is the one whose ultraviolet limit is 1; `Linear` divides by
/// `c_0` only and exists to exercise the verification harness with a known
/// wrong constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NelsonPrefactor {
    #[default]
    Squared,
    Linear,
}

/// `e_Lambda = (1 / c_0^2) int_{|k| <= Lambda} dk / (|k|^2 (1 + k^2/2))`.
pub fn nelson_self_energy(cutoff: f64) -> f64 {
    nelson_self_energy_with(cutoff, NelsonPrefactor::Squared)
}

pub fn nelson_self_energy_with(cutoff: f64, prefactor: NelsonPrefactor) -> f64 {
    assert!(
        cutoff >= 0.0,
        "nelson_self_energy needs Lambda >= 0, got {cutoff}"
    );
    let f = |k: f64| 1.0 / (1.0 + k * k / 2.0);
    let radial = if cutoff.is_infinite() {
        integrate_to_infinity(f, 0.0, 1e-15, 1e-14).value
    } else {
        integrate(f, 0.0, cutoff, 1e-15, 1e-14).value
    };
    let c = c0();
    let norm = match prefactor {
        NelsonPrefactor::Squared => c * c,
        NelsonPrefactor::Linear => c,
    };
    4.0 * PI * radial / norm
}

/// `int e^{-|k|^2 / 2K^2} |k|^{-2} e^{i k.x} dk` at `|x| = r`, reduced to
/// `(4 pi / r) int_0^inf e^{-u^2 / 2q^2} sin(u) / u du` with `q = K r`.
///
/// The reduced integrand is entire and even in `u`, so the trapezoid rule
/// converges geometrically; the step shrinks with `q` to follow the Gaussian
/// envelope.
pub fn smeared_kernel(cutoff: f64, r: f64) -> f64 {
    assert!(cutoff > 0.0 && r > 0.0, "smeared_kernel needs K, r > 0");
    let q = cutoff * r;
    // the transform of the integrand lives in |t| <= 1 + 8/q up to e^{-32}
    let h = PI / (1.0 + 8.0 / q);
    let end = 9.0 * q;
    let count = (end / h).ceil() as usize;
    let mut sum = 0.5;
    for n in 1..=count {
        let u = n as f64 * h;
        sum += (-u * u / (2.0 * q * q)).exp() * u.sin() / u;
    }
    // the exact value is below 2 pi^2 / r; only rounding can push it over
    (4.0 * PI / r * sum * h).min(2.0 * PI * PI / r)
}
