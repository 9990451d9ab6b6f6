//! Seeded property suites over every module, with a one-line-per-suite
//! summary.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polaron_core::fock::{
    discretized_polaron_self_energy, quadratic_min_exact, truncated_ground_energy, Mode, ModeSet,
    TruncatedFockProblem, DEFAULT_N_MAX,
};
use polaron_core::numerics::quad::integrate;
use polaron_core::numerics::special::{c0, c_mu, erf, i_infinity};
use polaron_core::numerics::{
    coulomb_energy, coulomb_energy_fourier, hls_checks, i_cutoff, nelson_self_energy_with,
    radial_fourier, smeared_kernel, NelsonPrefactor, RadialDensity, RadialGrid,
};
use polaron_core::ptf::{ptf_bracket, scaling_check};
use polaron_core::upper::{
    default_mu, exponent_gap, fermi_radius, gaussian_gradient_norm_sq, phase_space_dm,
    phase_space_moments,
};
use polaron_core::Regime;

use crate::commands::gradient_solution;
use crate::output::write_file;
use crate::sweep::{shooting_solution, Evaluator};
use crate::{CliError, Fault, Outcome, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    /// What the suite checks, in words.
    pub property: &'static str,
    pub pass: bool,
    pub detail: String,
}

struct Suite {
    name: &'static str,
    property: &'static str,
    run: fn(&mut Context) -> Result<(bool, String), CliError>,
}

/// Inputs of one suite run.
pub struct Context<'a> {
    pub config: &'a RunConfig,
    rng: ChaCha8Rng,
    grid: Arc<RadialGrid>,
}

impl Context<'_> {
    fn prefactor(&self) -> NelsonPrefactor {
        match self.config.inject_fault {
            Fault::ElambdaPrefactor => NelsonPrefactor::Linear,
            Fault::None => NelsonPrefactor::Squared,
        }
    }
}

fn check(pass: bool, detail: String) -> Result<(bool, String), CliError> {
    Ok((pass, detail))
}

fn random_mixture(rng: &mut ChaCha8Rng, grid: Arc<RadialGrid>) -> Result<RadialDensity, CliError> {
    let count = rng.gen_range(1..=4);
    let parts: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(0.1..3.0), rng.gen_range(0.3..3.0)))
        .collect();
    Ok(RadialDensity::gaussian_mixture(grid, &parts)?)
}

fn random_profile(rng: &mut ChaCha8Rng, grid: Arc<RadialGrid>) -> Result<RadialDensity, CliError> {
    if rng.gen_bool(0.5) {
        return random_mixture(rng, grid);
    }
    let m = rng.gen_range(1..=3);
    let (s, core, w) = (
        rng.gen_range(0.5..2.5),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.4..1.5),
    );
    Ok(RadialDensity::from_fn(grid, move |r| {
        r.powi(2 * m) * (-(r * r) / (s * s)).exp() + core * (-(r * r) / (w * w)).exp()
    })?)
}

fn i_infinity_suite(_: &mut Context) -> Result<(bool, String), CliError> {
    let err = (i_cutoff(f64::INFINITY) - i_infinity()).abs();
    check(err <= 1e-10, format!("err={err:.2e} tol=1e-10"))
}

fn e_lambda_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let pf = ctx.prefactor();
    let mut worst: f64 = 0.0;
    for lambda in [0.1, 1.0, 10.0, 100.0] {
        let closed = 2.0 / PI * (lambda / SQRT_2).atan();
        worst = worst.max((nelson_self_energy_with(lambda, pf) - closed).abs());
    }
    let limit = (nelson_self_energy_with(f64::INFINITY, pf) - 1.0).abs();
    check(
        worst <= 1e-8 && limit <= 1e-8,
        format!("err={worst:.2e} limit_err={limit:.2e} tol=1e-8"),
    )
}

fn c_mu_suite(_: &mut Context) -> Result<(bool, String), CliError> {
    let err = (c_mu(1.0) - 1.0).abs();
    let c = (c0() - 2f64.powf(0.75) * PI).abs();
    check(err <= 1e-15 && c == 0.0, format!("c_mu(1)-1={err:.2e}"))
}

fn monotone_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let pf = ctx.prefactor();
    let xs: Vec<f64> = (0..60)
        .map(|i| 10f64.powf(-2.0 + i as f64 / 10.0))
        .collect();
    let i_vals: Vec<f64> = xs.iter().map(|&x| i_cutoff(x)).collect();
    let e_vals: Vec<f64> = xs.iter().map(|&x| nelson_self_energy_with(x, pf)).collect();
    let ok = |v: &[f64]| v.windows(2).all(|w| w[1] >= w[0]);
    check(ok(&i_vals) && ok(&e_vals), format!("points={}", xs.len()))
}

fn grid_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let g = &ctx.grid;
    let err = (g.integrate(|r| (-r * r).exp()) - PI.powf(1.5)).abs() / PI.powf(1.5);
    check(
        err <= g.tolerance(),
        format!("err={err:.2e} tol={:e}", g.tolerance()),
    )
}

fn symmetry_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = random_mixture(&mut ctx.rng, ctx.grid.clone())?;
        let b = random_mixture(&mut ctx.rng, ctx.grid.clone())?;
        let (ab, ba) = (coulomb_energy(&a, &b)?, coulomb_energy(&b, &a)?);
        worst = worst.max((ab - ba).abs() / ab.abs());
    }
    check(
        worst <= 1e-10,
        format!("pairs=20 err={worst:.2e} tol=1e-10"),
    )
}

fn plancherel_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rho = random_mixture(&mut ctx.rng, ctx.grid.clone())?;
        let real = coulomb_energy(&rho, &rho)?;
        worst = worst.max((real - coulomb_energy_fourier(&rho)).abs() / real);
    }
    check(
        worst <= 1e-6,
        format!("mixtures=50 err={worst:.2e} tol=1e-6"),
    )
}

fn newton_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let k = 10f64.powf(ctx.rng.gen_range(-2.0..2.0));
        let r = 10f64.powf(ctx.rng.gen_range(-2.0..2.0));
        let v = smeared_kernel(k, r);
        let newton = 2.0 * PI * PI / r;
        let closed = newton * erf(k * r / SQRT_2);
        ok &= v <= newton;
        if newton - closed > 4.0 * f64::EPSILON * newton {
            ok &= v < newton;
        }
        worst = worst.max((v - closed).abs() / newton);
    }
    check(
        ok && worst <= 1e-10,
        format!("pairs=100 closed_form_err={worst:.2e}"),
    )
}

fn hls_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mus: Vec<f64> = (0..10).map(|_| ctx.rng.gen_range(0.1..1.19)).collect();
    let mut failures = 0;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_profile(&mut ctx.rng, ctx.grid.clone())?;
        for c in hls_checks(&rho, &mus)? {
            failures += usize::from(!c.holds);
            max_ratio = max_ratio.max(c.lhs / c.rhs);
        }
    }
    check(
        failures == 0,
        format!("densities=100 exponents=10 failures={failures} max_lhs_over_rhs={max_ratio:.4}"),
    )
}

fn ptf_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let s = shooting_solution(ctx.config)?;
    let g = gradient_solution(ctx.config)?;
    let gap = (s.energy - g.energy).abs() / s.energy.abs();
    let b = ptf_bracket();
    let bracketed = [s.energy, g.energy]
        .iter()
        .all(|e| b.lower <= *e && *e <= b.upper);
    let virial = s.virial_defect.max(g.virial_defect);
    check(
        gap < ctx.config.ptf_agreement
            && bracketed
            && virial < ctx.config.virial_tolerance
            && s.energy < 0.0,
        format!(
            "gap={gap:.2e} virial={virial:.2e} bracketed={bracketed} e_ptf={:.9}",
            s.energy
        ),
    )
}

fn scaling_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let s = shooting_solution(ctx.config)?;
    let mut worst: f64 = 0.0;
    for n in [2.0, 10.0, 1000.0] {
        let c = scaling_check(&s.density, n)?;
        worst = worst.max((c.lhs - c.rhs).abs() / c.rhs.abs());
    }
    check(worst <= 1e-10, format!("err={worst:.2e} tol=1e-10"))
}

fn exponent_suite(_: &mut Context) -> Result<(bool, String), CliError> {
    let exact = exponent_gap(default_mu()) == Ratio::new(1, 17);
    let positive = (1..40).all(|k| exponent_gap(Ratio::new(40 + k, 40)) > Ratio::from_integer(0));
    check(
        exact && positive,
        format!(
            "gap(37/31)={} positive_on_samples={positive}",
            exponent_gap(default_mu())
        ),
    )
}

fn phase_space_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let n = ctx.rng.gen_range(1..=5) as f64;
        let parts: Vec<(f64, f64)> = (0..3)
            .map(|_| (ctx.rng.gen_range(0.1..1.0), ctx.rng.gen_range(0.3..3.0)))
            .collect();
        let total: f64 = parts.iter().map(|p| p.0).sum();
        let scaled: Vec<(f64, f64)> = parts.iter().map(|&(m, s)| (n * m / total, s)).collect();
        let rho = RadialDensity::gaussian_mixture(ctx.grid.clone(), &scaled)?;
        let eps = ctx.rng.gen_range(0.2..2.0);
        let dm = phase_space_dm(&rho, eps)?;
        let direct = phase_space_moments(&rho, eps, fermi_radius);
        worst = worst
            .max((direct.mass - rho.mass()).abs() / rho.mass())
            .max((direct.kinetic - dm.trace_kinetic).abs() / dm.trace_kinetic);
    }
    check(
        worst <= 1e-6,
        format!("densities=5 err={worst:.2e} tol=1e-6"),
    )
}

fn gradient_norm_suite(_: &mut Context) -> Result<(bool, String), CliError> {
    let v = gaussian_gradient_norm_sq();
    check(
        (v - 0.75).abs() <= 1e-12,
        format!("value={v:.15} closed_form=3/4"),
    )
}

fn fock_truncation_suite(_: &mut Context) -> Result<(bool, String), CliError> {
    let exact = quadratic_min_exact(1.0, 1.0)?;
    let mut monotone = true;
    let mut last = f64::INFINITY;
    for n_max in 1..=DEFAULT_N_MAX {
        let e = truncated_ground_energy(&TruncatedFockProblem::new(
            Complex64::new(1.0, 0.0),
            1.0,
            n_max,
        )?);
        monotone &= e >= exact - 1e-15 && e <= last + 1e-15;
        last = e;
    }
    let err = (last - exact).abs();
    check(
        err <= 1e-8 && monotone,
        format!("n_max={DEFAULT_N_MAX} err={err:.2e} tol=1e-8 variational={monotone}"),
    )
}

fn fock_decoupling_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let zero = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let count: usize = ctx.rng.gen_range(2..=3);
        let n_max: usize = ctx.rng.gen_range(3..=6);
        let modes: Vec<Mode> = (0..count)
            .map(|j| Mode {
                k: j as f64 + 1.0,
                weight: ctx.rng.gen_range(0.2..2.0),
                f: Complex64::new(ctx.rng.gen_range(-1.0..1.0), ctx.rng.gen_range(-1.0..1.0)),
            })
            .collect();
        let set = ModeSet::new(modes, ctx.rng.gen_range(0.5..2.0))?;
        let d = n_max + 1;
        let dim = d.pow(count as u32);
        let mut h = DMatrix::from_element(dim, dim, zero);
        let mut separate = 0.0;
        for j in 0..count {
            let p = set.single_mode(j, n_max)?;
            separate += truncated_ground_energy(&p);
            let block = p.dense();
            let right = d.pow((count - 1 - j) as u32);
            // I (x) block (x) I in the product basis
            for a in 0..dim {
                for b in 0..dim {
                    let (ia, ib) = ((a / right) % d, (b / right) % d);
                    if a / (right * d) == b / (right * d) && a % right == b % right {
                        h[(a, b)] += block[ia][ib];
                    }
                }
            }
        }
        let joint = h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        worst = worst.max((joint - separate).abs() / separate.abs().max(1.0));
    }
    check(
        worst <= 1e-10,
        format!("mode_sets=10 err={worst:.2e} tol=1e-10"),
    )
}

fn fock_continuum_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    for (alpha, cutoff) in [(1.3, f64::INFINITY), (0.8, 2.0)] {
        let rho = RadialDensity::gaussian_mixture(ctx.grid.clone(), &[(0.4, 0.7), (0.6, 1.9)])?;
        let discrete = discretized_polaron_self_energy(&rho, cutoff, 512, alpha)?;
        let top = cutoff.min(40.0);
        let radial = integrate(|k| radial_fourier(&rho, k).powi(2), 0.0, top, 1e-14, 1e-12).value;
        let continuum = -alpha / (c0() * c0()) * 4.0 * PI * radial;
        worst = worst.max((discrete - continuum).abs() / continuum.abs());
    }
    check(worst <= 1e-5, format!("modes=512 err={worst:.2e} tol=1e-5"))
}

fn sample_points(ctx: &mut Context, count: usize) -> Vec<(f64, f64, u64)> {
    (0..count)
        .map(|_| {
            let alpha = ctx.rng.gen_range(0.0..3.0);
            let u = ctx.rng.gen_range(0.0..4.0);
            let n = 10f64.powf(ctx.rng.gen_range(0.0..6.0)).round() as u64;
            (alpha, u, n.max(1))
        })
        .collect()
}

fn bounds_suite(ctx: &mut Context) -> Result<(bool, String), CliError> {
    let ev = Evaluator::new(ctx.config, true)?;
    let points = sample_points(ctx, 200);
    let (mut linear, mut ordered, mut dispatch) = (true, true, true);
    for (alpha, u, n) in points {
        let p = ev.params(alpha, u, n)?;
        let row = ev.evaluate(&p)?.row();
        linear &= row.upper_thm4 == -(alpha * n as f64);
        ordered &= row.violations().is_empty();
        let attractive = p.regime() != Regime::Physical;
        dispatch &= row.upper_thm1.is_some() == attractive
            && row.lower_thm2.is_some() == attractive
            && row.lower_thm3.is_some() == (p.regime() == Regime::Physical)
            && row.lower_main_a.is_some() == (p.regime() != Regime::Unphysical && u > 0.0);
    }
    check(
        linear && ordered && dispatch,
        format!("points=200 linear_exact={linear} upper_ge_lower={ordered} dispatch={dispatch}"),
    )
}

const SUITES: &[Suite] = &[
    Suite {
        name: "i_infinity",
        property: "I_R quadrature at R = inf equals (sqrt2-1)/sqrt(pi)",
        run: i_infinity_suite,
    },
    Suite {
        name: "e_lambda",
        property: "e_Lambda equals (2/pi) atan(Lambda/sqrt2) and tends to 1",
        run: e_lambda_suite,
    },
    Suite {
        name: "c_mu_unit",
        property: "c_mu(1) = 1 and c_0 = 2^{3/4} pi",
        run: c_mu_suite,
    },
    Suite {
        name: "cutoff_monotone",
        property: "I_R and e_Lambda are nondecreasing",
        run: monotone_suite,
    },
    Suite {
        name: "grid_quadrature",
        property: "grid integral of exp(-r^2) equals pi^{3/2}",
        run: grid_suite,
    },
    Suite {
        name: "coulomb_symmetry",
        property: "D(rho, sigma) = D(sigma, rho)",
        run: symmetry_suite,
    },
    Suite {
        name: "plancherel",
        property: "real-space and Fourier Coulomb energies agree",
        run: plancherel_suite,
    },
    Suite {
        name: "newton_bound",
        property: "smeared kernel <= 2 pi^2 / r and equals 2 pi^2 erf(Kr/sqrt2)/r",
        run: newton_suite,
    },
    Suite {
        name: "hls",
        property: "D_mu(rho) <= a_mu |rho|_1^{2-5mu/6} |rho|_{5/3}^{5mu/6}",
        run: hls_suite,
    },
    Suite {
        name: "ptf_solvers",
        property: "shooting and gradient E_PTF agree, bracketed, virial, negative",
        run: ptf_suite,
    },
    Suite {
        name: "ptf_scaling",
        property: "E_PTF(rho_N) = N^{7/3} E_PTF(rho)",
        run: scaling_suite,
    },
    Suite {
        name: "exponent_gap",
        property: "7/3 - (9+5mu)/(3+3mu) = 1/17 at mu = 37/31, positive on (1, 6/5)",
        run: exponent_suite,
    },
    Suite {
        name: "phase_space",
        property: "phase-space state has mass N and the stated kinetic energy",
        run: phase_space_suite,
    },
    Suite {
        name: "gradient_norm",
        property: "|grad g|^2 by quadrature equals 3/4",
        run: gradient_norm_suite,
    },
    Suite {
        name: "fock_truncation",
        property: "truncated ground energy decreases to -|f|^2/delta",
        run: fock_truncation_suite,
    },
    Suite {
        name: "fock_decoupling",
        property: "ground energy of a mode set is the sum over modes",
        run: fock_decoupling_suite,
    },
    Suite {
        name: "fock_continuum",
        property: "512-mode self-energy matches the continuum integral",
        run: fock_continuum_suite,
    },
    Suite {
        name: "bound_rows",
        property: "-alpha N exact, upper >= lower, regime dispatch",
        run: bounds_suite,
    },
];

/// Runs every suite in order. Suite `i` draws from its own stream seeded
/// with `seed + i`, so suites do not disturb each other.
pub fn run_suites(config: &RunConfig) -> Result<Vec<SuiteResult>, CliError> {
    let grid = config.grid()?;
    let mut out = Vec::with_capacity(SUITES.len());
    for (i, suite) in SUITES.iter().enumerate() {
        let mut ctx = Context {
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64)),
            grid: grid.clone(),
        };
        let (pass, detail) = match (suite.run)(&mut ctx) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        out.push(SuiteResult {
            name: suite.name,
            property: suite.property,
            pass,
            detail,
        });
    }
    Ok(out)
}

pub fn summary(config: &RunConfig, results: &[SuiteResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "seed = {}", config.seed);
    let _ = writeln!(s, "fault = {}", config.inject_fault.as_str());
    for r in results {
        let _ = writeln!(
            s,
            "suite={} status={} {} property=\"{}\"",
            r.name,
            if r.pass { "pass" } else { "fail" },
            r.detail,
            r.property
        );
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    let _ = writeln!(
        s,
        "total={} passed={} failed={failed}",
        results.len(),
        results.len() - failed
    );
    s
}

pub fn command(config: &RunConfig) -> Result<Outcome, CliError> {
    let results = run_suites(config)?;
    let text = summary(config, &results);
    write_file(&config.out, "verify_summary.txt", &text)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    let failure = if failed.is_empty() {
        None
    } else {
        Some(format!("failed suites: {}", failed.join(", ")))
    };
    Ok(Outcome { text, failure })
}
