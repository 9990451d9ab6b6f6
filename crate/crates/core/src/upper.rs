//! Upper bounds on the ground-state energy: the phase-space trial density
//! matrix, the Thomas-Fermi bound with its smearing and Riesz error terms,
//! the linear bound `-alpha N` and the one-electron Gaussian trial state.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_rational::Ratio;

use crate::numerics::quad::{integrate, integrate_to_infinity};
use crate::numerics::special::{c_mu, c_tf};
use crate::numerics::{
    gaussian_smoothed_with, golden_section, nelson_self_energy, RadialDensity, RieszEvaluator,
    Spectrum,
};
use crate::ptf::PtfSolution;
use crate::report::{BoundKind, Terms, UpperBoundReport};
use crate::{CouplingParams, Error, Result};

/// `|grad g|^2` for `g(x) = (2 pi)^{-3/4} e^{-x^2/4}`, by quadrature.
///
/// `grad g = -(x/2) g` and `|g|^2` is the standard normal density, so the
/// value is `E|x|^2 / 4 = 3/4`.
pub fn gaussian_gradient_norm_sq() -> f64 {
    let density = |r: f64| (2.0 * PI).powf(-1.5) * (-0.5 * r * r).exp();
    integrate_to_infinity(
        |r| 4.0 * PI * r * r * 0.25 * r * r * density(r),
        0.0,
        1e-16,
        1e-14,
    )
    .value
}

/// Radius of the momentum ball occupied at density `rho`:
/// `(6 pi^2 rho)^{1/3}`.
pub fn fermi_radius(rho: f64) -> f64 {
    (6.0 * PI * PI * rho).cbrt()
}

/// Phase-space trial density matrix `gamma = (2 pi)^{-3} int M(p,q) Pi_{pq}`
/// built from coherent states `Pi_{pq}` of the Gaussian `g_eps`, reduced to
/// its density and kinetic energy.
#[derive(Debug, Clone)]
pub struct PhaseSpaceDM {
    pub rho: RadialDensity,
    pub width: f64,
    /// `rho * |g_eps|^2`.
    pub derived_density: RadialDensity,
    /// `Tr[-Delta gamma]`.
    pub trace_kinetic: f64,
    /// `(3/5)(6 pi^2)^{2/3} int rho^{5/3}`.
    pub fermi_kinetic: f64,
    /// `N |grad g|^2 / eps^2`.
    pub smearing_kinetic: f64,
    /// `int int rho_eps rho_eps / |x - y|` of the derived density.
    pub derived_coulomb: f64,
}

pub fn phase_space_dm(rho: &RadialDensity, eps: f64) -> Result<PhaseSpaceDM> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, inf)",
        });
    }
    let spectrum = Spectrum::new(rho);
    let derived_density = gaussian_smoothed_with(rho, &spectrum, eps)?;
    let fermi_kinetic = 2.0 * c_tf() * rho.integral_of_power(5.0 / 3.0);
    let smearing_kinetic = rho.mass() * gaussian_gradient_norm_sq() / (eps * eps);
    Ok(PhaseSpaceDM {
        rho: rho.clone(),
        width: eps,
        derived_density,
        trace_kinetic: fermi_kinetic + smearing_kinetic,
        fermi_kinetic,
        smearing_kinetic,
        derived_coulomb: spectrum.coulomb_smoothed(eps),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceMoments {
    /// `(2 pi)^{-3} int int M(p,q) dp dq`
    pub mass: f64,
    /// `(2 pi)^{-3} int int M(p,q) (p^2 + |grad g_eps|^2) dp dq`
    pub kinetic: f64,
}

/// Direct quadrature of the phase-space integrals with
/// `M(p,q) = 1` for `|p| <= radius(rho(q))`: adaptive Gauss-Kronrod over
/// `|p|` at every grid node, split at the radius, then the grid rule over
/// `q`. The ball volume formula is not used, so this checks the closed forms
/// in [`phase_space_dm`] and, through `radius`, the choice of Fermi radius.
pub fn phase_space_moments<F: Fn(f64) -> f64>(
    rho: &RadialDensity,
    eps: f64,
    radius: F,
) -> PhaseSpaceMoments {
    let smear = gaussian_gradient_norm_sq() / (eps * eps);
    let top = rho.values().iter().map(|&v| radius(v)).fold(0.0, f64::max) * 1.5 + 1.0;
    let norm = (2.0 * PI).powi(-3);
    let (mut mass, mut kinetic) = (0.0, 0.0);
    for (w, &v) in rho.grid().weights().iter().zip(rho.values()) {
        let edge = radius(v);
        let inside = |p: f64| if p <= edge { 4.0 * PI * p * p } else { 0.0 };
        // split at the jump of M so that each piece is smooth
        let split = |f: &dyn Fn(f64) -> f64| {
            integrate(f, 0.0, edge.min(top), 0.0, 1e-14).value
                + integrate(f, edge.min(top), top, 0.0, 1e-14).value
        };
        let m = split(&inside);
        let k = split(&|p| inside(p) * p * p);
        mass += w * norm * m;
        kinetic += w * norm * (k + smear * m);
    }
    PhaseSpaceMoments { mass, kinetic }
}

fn require_attractive(bound: &'static str, p: &CouplingParams) -> Result<()> {
    if SQRT_2 * p.alpha() < p.u() {
        return Err(Error::RegimeViolated {
            bound,
            required: "sqrt(2) alpha >= U",
            alpha: p.alpha(),
            u: p.u(),
        });
    }
    Ok(())
}

/// `(1/2) Tr[-Delta gamma] + (U - sqrt2 alpha) (1/2) D(rho_eps) - exchange`
/// with the exchange term set to zero. It enters with a minus sign and is
/// nonnegative, so dropping it keeps the value an upper bound.
pub fn hf_upper_value(dm: &PhaseSpaceDM, p: &CouplingParams) -> Result<UpperBoundReport> {
    require_attractive("Hartree-Fock upper bound", p)?;
    let mut terms = Terms::new();
    terms
        .push("trace_kinetic", dm.trace_kinetic)
        .push("coupling", p.u() - SQRT_2 * p.alpha())
        .push("derived_coulomb", dm.derived_coulomb)
        .push("exchange", 0.0)
        .push("vacuum", 0.0);
    Ok(UpperBoundReport {
        kind: BoundKind::HartreeFockUpper,
        params: *p,
        value: assemble(BoundKind::HartreeFockUpper, &terms),
        terms,
        formula: "trace_kinetic/2 + coupling * derived_coulomb/2 - exchange (exchange dropped)",
    })
}

/// `mu = 37/31`, the exponent that gives the error `N^{-1/17}`.
pub fn default_mu() -> Ratio<i64> {
    Ratio::new(37, 31)
}

/// Exponent of `N` in the optimal smearing width: `eps* ~ N^{-(3+mu)/(3(1+mu))}`.
pub fn optimal_width_exponent(mu: Ratio<i64>) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    let three = Ratio::from_integer(3);
    -(three + mu) / (three * (one + mu))
}

/// Exponent of `N` in the optimized error term, assembled from the Riesz
/// term `N^{2+mu/3} eps^{mu-1}` at the optimal width.
pub fn error_exponent(mu: Ratio<i64>) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    Ratio::from_integer(2) + mu / Ratio::from_integer(3) + (mu - one) * optimal_width_exponent(mu)
}

/// `(9 + 5 mu) / (3 + 3 mu)`.
pub fn error_exponent_closed_form(mu: Ratio<i64>) -> Ratio<i64> {
    (Ratio::from_integer(9) + Ratio::from_integer(5) * mu)
        / (Ratio::from_integer(3) + Ratio::from_integer(3) * mu)
}

/// `7/3 - (9 + 5 mu)/(3 + 3 mu) = 2 (mu - 1) / (3 (1 + mu))`.
pub fn exponent_gap(mu: Ratio<i64>) -> Ratio<i64> {
    Ratio::new(7, 3) - error_exponent(mu)
}

/// How the smearing width of the phase-space state is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmearingWidth {
    /// Minimizes the two error terms in closed form.
    Optimal,
    Fixed(f64),
}

/// The Thomas-Fermi upper bound for one minimizer and one Riesz exponent.
///
/// `E_N <= beta^2 [N^{7/3} E_PTF + |grad g|^2 N eps^{-2}
///        + N^{2+mu/3} eps^{mu-1} (2 pi)^{mu-2} (c_mu / c_{3-mu}) D_mu(rho*)]`,
/// capped at 0, where `E_N <= 0` always holds. The Riesz energy of the
/// minimizer is computed once here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomasFermiUpper {
    e_ptf: f64,
    mu: f64,
    riesz: f64,
}

impl ThomasFermiUpper {
    pub fn new(solution: &PtfSolution, mu: f64) -> Result<Self> {
        check_bound_mu(mu)?;
        let riesz = RieszEvaluator::new(&solution.density).energy(mu)?;
        Self::from_parts(solution.energy, mu, riesz)
    }

    pub fn from_parts(e_ptf: f64, mu: f64, riesz: f64) -> Result<Self> {
        check_bound_mu(mu)?;
        Ok(Self { e_ptf, mu, riesz })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn e_ptf(&self) -> f64 {
        self.e_ptf
    }

    pub fn riesz_energy(&self) -> f64 {
        self.riesz
    }

    /// `(2 pi)^{mu-2} c_mu / c_{3-mu}`.
    pub fn riesz_prefactor(&self) -> f64 {
        (2.0 * PI).powf(self.mu - 2.0) * c_mu(self.mu) / c_mu(3.0 - self.mu)
    }

    /// Error terms at width `eps` for `n` electrons: `(smearing, riesz)`.
    pub fn error_terms(&self, n: f64, eps: f64) -> (f64, f64) {
        let smearing = gaussian_gradient_norm_sq() * n / (eps * eps);
        let riesz = n.powf(2.0 + self.mu / 3.0)
            * eps.powf(self.mu - 1.0)
            * self.riesz_prefactor()
            * self.riesz;
        (smearing, riesz)
    }

    /// Stationary point of `A eps^{-2} + B eps^{mu-1}`:
    /// `eps^{mu+1} = 2A / ((mu - 1) B)`.
    pub fn optimal_width(&self, n: f64) -> f64 {
        let a = gaussian_gradient_norm_sq() * n;
        let b = n.powf(2.0 + self.mu / 3.0) * self.riesz_prefactor() * self.riesz;
        (2.0 * a / ((self.mu - 1.0) * b)).powf(1.0 / (self.mu + 1.0))
    }

    pub fn bound(&self, p: &CouplingParams, width: SmearingWidth) -> Result<UpperBoundReport> {
        require_attractive("Thomas-Fermi upper bound", p)?;
        let n = p.n_f64();
        let eps = match width {
            SmearingWidth::Optimal => self.optimal_width(n),
            SmearingWidth::Fixed(e) if e > 0.0 && e.is_finite() => e,
            SmearingWidth::Fixed(e) => {
                return Err(Error::OutOfRange {
                    name: "eps",
                    value: e,
                    range: "(0, inf)",
                })
            }
        };
        let (smearing, riesz) = self.error_terms(n, eps);
        let beta = p.beta();
        let mut terms = Terms::new();
        terms
            .push("beta_sq", beta * beta)
            .push("e_ptf", self.e_ptf)
            .push("ptf_leading", n.powf(7.0 / 3.0) * self.e_ptf)
            .push("gradient_norm_sq", gaussian_gradient_norm_sq())
            .push("eps", eps)
            .push("mu", self.mu)
            .push("smearing_penalty", smearing)
            .push("riesz_energy", self.riesz)
            .push("riesz_error", riesz)
            .push("exchange", 0.0);
        let raw = beta * beta * (terms.get("ptf_leading") + smearing + riesz);
        terms.push("uncapped", raw);
        Ok(UpperBoundReport {
            kind: BoundKind::ThomasFermiUpper,
            params: *p,
            value: assemble(BoundKind::ThomasFermiUpper, &terms),
            terms,
            formula: "min(beta_sq * (ptf_leading + smearing_penalty + riesz_error), 0)",
        })
    }
}

fn check_bound_mu(mu: f64) -> Result<()> {
    if !(mu > 1.0 && mu < 1.2) {
        return Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            range: "(1, 6/5)",
        });
    }
    Ok(())
}

/// One-shot form of [`ThomasFermiUpper::bound`].
pub fn thomas_fermi_upper_bound(
    p: &CouplingParams,
    mu: f64,
    width: SmearingWidth,
    solution: &PtfSolution,
) -> Result<UpperBoundReport> {
    ThomasFermiUpper::new(solution, mu)?.bound(p, width)
}

/// `E_N <= -alpha N`, with `-alpha e_Lambda N` for the cutoff attached.
pub fn linear_upper_bound(p: &CouplingParams) -> UpperBoundReport {
    let e_lambda = nelson_self_energy(p.lambda());
    let mut terms = Terms::new();
    terms
        .push("alpha", p.alpha())
        .push("N", p.n_f64())
        .push("nelson_self_energy", e_lambda)
        .push("cutoff_value", -p.alpha() * e_lambda * p.n_f64());
    UpperBoundReport {
        kind: BoundKind::LinearUpper,
        params: *p,
        value: assemble(BoundKind::LinearUpper, &terms),
        terms,
        formula: "-alpha * N",
    }
}

/// Best Gaussian one-electron trial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTrial {
    pub value: f64,
    /// Width `sigma` of `|f|^2`.
    pub width: f64,
}

/// Minimizes `(1/2)|grad f|^2 - (sqrt2 alpha / 2) D(|f|^2)` over Gaussians
/// `|f|^2` of width `sigma` in `sigma_range`, by golden section in
/// `ln sigma`. For a Gaussian the two terms are `3 / (8 sigma^2)` and
/// `(sqrt2 alpha / 2) / (sqrt(pi) sigma)`.
pub fn pekar_gaussian_n1(alpha: f64, sigma_range: (f64, f64)) -> Result<GaussianTrial> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, inf)",
        });
    }
    let (lo, hi) = sigma_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::OutOfRange {
            name: "sigma_range",
            value: lo,
            range: "0 < lo < hi < inf",
        });
    }
    if alpha == 0.0 {
        return Ok(GaussianTrial {
            value: 0.0,
            width: f64::INFINITY,
        });
    }
    let energy =
        |sigma: f64| 3.0 / (8.0 * sigma * sigma) - SQRT_2 * alpha / 2.0 / (PI.sqrt() * sigma);
    let (t, value) = golden_section(|t| energy(t.exp()), lo.ln(), hi.ln(), 1e-12);
    Ok(GaussianTrial {
        value,
        width: t.exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityViolation {
    pub n: u64,
    pub m: u64,
    /// `value(n + m)`
    pub joint: f64,
    /// `value(n) + value(m)`
    pub split: f64,
}

/// Every pair `n <= m` with `n + m` in the table and
/// `value(n + m) > value(n) + value(m)`, beyond roundoff of 1e-12 relative.
pub fn subadditivity_check(table: &BTreeMap<u64, f64>) -> Vec<SubadditivityViolation> {
    let mut out = Vec::new();
    for (&n, &vn) in table {
        for (&m, &vm) in table.range(n..) {
            let Some(&joint) = table.get(&(n + m)) else {
                continue;
            };
            let split = vn + vm;
            if joint - split > 1e-12 * joint.abs().max(split.abs()) {
                out.push(SubadditivityViolation { n, m, joint, split });
            }
        }
    }
    out
}

/// Value of an upper-bound report from its terms.
pub(crate) fn assemble(kind: BoundKind, t: &Terms) -> f64 {
    match kind {
        BoundKind::ThomasFermiUpper => (t.get("beta_sq")
            * (t.get("ptf_leading") + t.get("smearing_penalty") + t.get("riesz_error")))
        .min(0.0),
        BoundKind::HartreeFockUpper => {
            0.5 * t.get("trace_kinetic") + t.get("coupling") * 0.5 * t.get("derived_coulomb")
                - t.get("exchange")
        }
        BoundKind::LinearUpper => -(t.get("alpha") * t.get("N")),
        other => panic!("{} is not an upper bound", other.tag()),
    }
}
