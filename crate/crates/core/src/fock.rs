//! Finite-mode phonon Fock space truncated in occupation number, for
//! checking `int [delta a*a + conj(f) a + f a*] >= -|f|^2 / delta` and its
//! attainment by coherent states.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::quad::gauss_legendre;
use crate::numerics::special::c0;
use crate::numerics::{radial_fourier, RadialDensity, Spectrum};
use crate::{Error, Result};

/// Default occupation cutoff.
pub const DEFAULT_N_MAX: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Wave number `|k|`.
    pub k: f64,
    /// Quadrature weight of the mode.
    pub weight: f64,
    /// Coupling amplitude `f(k)`.
    pub f: Complex64,
}

/// Discretized field `sum_j w_j [delta a_j* a_j + conj(f_j) a_j + f_j a_j*]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    modes: Vec<Mode>,
    delta: f64,
}

impl ModeSet {
    pub fn new(modes: Vec<Mode>, delta: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidGrid(
                "a mode set needs at least one mode".into(),
            ));
        }
        if let Some(m) = modes.iter().find(|m| !(m.weight > 0.0)) {
            return Err(Error::OutOfRange {
                name: "mode weight",
                value: m.weight,
                range: "(0, inf)",
            });
        }
        check_delta(delta)?;
        Ok(Self { modes, delta })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `sum_j w_j |f_j|^2`.
    pub fn coupling_norm_sq(&self) -> f64 {
        self.modes.iter().map(|m| m.weight * m.f.norm_sqr()).sum()
    }

    /// The minimizing coherent amplitudes `z_j = -f_j / delta`.
    pub fn optimal_amplitudes(&self) -> Vec<Complex64> {
        self.modes.iter().map(|m| -m.f / self.delta).collect()
    }

    /// Single-mode problem of mode `j`. The discrete operators `a_j` of a
    /// mode with weight `w` obey `[a_j, a_j*] = 1 / w`, so `b = sqrt(w) a_j`
    /// is canonical and the mode is `delta b*b + sqrt(w) (conj(f) b + f b*)`.
    pub fn single_mode(&self, j: usize, n_max: usize) -> Result<TruncatedFockProblem> {
        let m = self.modes[j];
        TruncatedFockProblem::new(m.weight.sqrt() * m.f, self.delta, n_max)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, inf)",
        });
    }
    Ok(())
}

/// `delta a*a + conj(f) a + f a*` on occupations `0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedFockProblem {
    pub f: Complex64,
    pub delta: f64,
    pub n_max: usize,
}

impl TruncatedFockProblem {
    pub fn new(f: Complex64, delta: f64, n_max: usize) -> Result<Self> {
        check_delta(delta)?;
        if n_max == 0 {
            return Err(Error::OutOfRange {
                name: "n_max",
                value: 0.0,
                range: "{1, 2, ...}",
            });
        }
        Ok(Self { f, delta, n_max })
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Diagonal `delta n` and subdiagonal `<n+1| H |n> = f sqrt(n+1)`.
    pub fn matrix(&self) -> (Vec<f64>, Vec<Complex64>) {
        let diag = (0..self.dim()).map(|n| self.delta * n as f64).collect();
        let sub = (0..self.n_max)
            .map(|n| self.f * ((n + 1) as f64).sqrt())
            .collect();
        (diag, sub)
    }

    /// Dense Hermitian matrix, row-major.
    pub fn dense(&self) -> Vec<Vec<Complex64>> {
        let (diag, sub) = self.matrix();
        let d = self.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (n, v) in diag.iter().enumerate() {
            m[n][n] = Complex64::new(*v, 0.0);
        }
        for (n, s) in sub.iter().enumerate() {
            m[n + 1][n] = *s;
            m[n][n + 1] = s.conj();
        }
        m
    }
}

/// `-|f|^2 / delta`.
pub fn quadratic_min_exact(f_norm_sq: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(-f_norm_sq / delta)
}

/// Smallest eigenvalue of the truncated problem by bisection on the Sturm
/// sequence. A Hermitian tridiagonal matrix has the spectrum of the real one
/// with subdiagonal `|f| sqrt(n+1)`.
pub fn truncated_ground_energy(p: &TruncatedFockProblem) -> f64 {
    let (diag, sub) = p.matrix();
    let off: Vec<f64> = sub.iter().map(|s| s.norm()).collect();
    if off.iter().all(|&e| e == 0.0) {
        return diag.iter().cloned().fold(f64::INFINITY, f64::min);
    }
    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1] } else { 0.0 } + off.get(i).copied().unwrap_or(0.0);
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if eigenvalues_below(&diag, &off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn eigenvalues_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i > 0 {
            off[i - 1] * off[i - 1] / q
        } else {
            0.0
        };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Field energy and interaction in the coherent state `a_j eta = z_j eta`:
/// `delta sum w_j |z_j|^2` and `sum w_j (conj(f_j) z_j + f_j conj(z_j))`.
pub fn coherent_expectations(modes: &ModeSet, z: &[Complex64]) -> Result<(f64, f64)> {
    if z.len() != modes.modes.len() {
        return Err(Error::InvalidDensity(format!(
            "{} amplitudes for {} modes",
            z.len(),
            modes.modes.len()
        )));
    }
    let mut field = 0.0;
    let mut interaction = 0.0;
    for (m, z) in modes.modes.iter().zip(z) {
        field += m.weight * z.norm_sqr();
        interaction += m.weight * 2.0 * (m.f.conj() * z).re;
    }
    Ok((modes.delta * field, interaction))
}

/// Radial phonon modes for a radial density: Gauss-Legendre nodes in
/// `|k|` on `[0, min(Lambda, k_top)]` with weights `4 pi k^2 w`, and
/// couplings `f(k) = sqrt(alpha) rho_hat(k) / (c_0 k)`, unit phonon energy.
/// `k_top` is where the transform of `rho` has decayed below roundoff.
pub fn polaron_modes(
    rho: &RadialDensity,
    cutoff: f64,
    mode_count: usize,
    alpha: f64,
) -> Result<ModeSet> {
    if mode_count < 8 {
        return Err(Error::OutOfRange {
            name: "mode_count",
            value: mode_count as f64,
            range: "[8, inf)",
        });
    }
    if !(cutoff > 0.0) {
        return Err(Error::OutOfRange {
            name: "Lambda",
            value: cutoff,
            range: "(0, inf]",
        });
    }
    let top = cutoff.min(Spectrum::new(rho).k_max());
    let (x, w) = gauss_legendre(mode_count);
    let scale = alpha.sqrt() / c0();
    let modes = x
        .iter()
        .zip(&w)
        .map(|(x, w)| {
            let k = 0.5 * top * (x + 1.0);
            Mode {
                k,
                weight: 4.0 * PI * k * k * 0.5 * top * w,
                f: Complex64::new(scale * radial_fourier(rho, k) / k, 0.0),
            }
        })
        .collect();
    ModeSet::new(modes, 1.0)
}

/// Coherent-state minimum `-sum w |f|^2` of the discretized field, which
/// approximates `-(alpha / c_0^2) int_{|k| <= Lambda} |rho_hat|^2 / |k|^2 dk`.
pub fn discretized_polaron_self_energy(
    rho: &RadialDensity,
    cutoff: f64,
    mode_count: usize,
    alpha: f64,
) -> Result<f64> {
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let modes = polaron_modes(rho, cutoff, mode_count, alpha)?;
    let (field, interaction) = coherent_expectations(&modes, &modes.optimal_amplitudes())?;
    Ok(field + interaction)
}
