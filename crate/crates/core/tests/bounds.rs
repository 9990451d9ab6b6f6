use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::sync::{Arc, OnceLock};

use approx::assert_relative_eq;
use polaron_core::lower::*;
use polaron_core::numerics::{golden_section, RadialDensity, RadialGrid};
use polaron_core::ptf::*;
use polaron_core::upper::*;
use polaron_core::{CouplingParams, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MU: f64 = 37.0 / 31.0;

fn solution() -> &'static PtfSolution {
    static S: OnceLock<PtfSolution> = OnceLock::new();
    S.get_or_init(|| minimizer_from_profile(&solve_lane_emden(1e-12).unwrap()).unwrap())
}

fn upper() -> &'static ThomasFermiUpper {
    static U: OnceLock<ThomasFermiUpper> = OnceLock::new();
    U.get_or_init(|| ThomasFermiUpper::new(solution(), MU).unwrap())
}

fn random_density(rng: &mut ChaCha8Rng, grid: Arc<RadialGrid>) -> RadialDensity {
    let n = rng.gen_range(1..=5) as f64;
    let parts: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(0.1..1.0), rng.gen_range(0.3..3.0)))
        .collect();
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let scaled: Vec<(f64, f64)> = parts.iter().map(|&(m, s)| (n * m / total, s)).collect();
    RadialDensity::gaussian_mixture(grid, &scaled).unwrap()
}

#[test]
fn phase_space_identities_against_direct_quadrature() {
    let grid = Arc::new(RadialGrid::default_log());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let rho = random_density(&mut rng, Arc::clone(&grid));
        let eps = rng.gen_range(0.2..2.0);
        let dm = phase_space_dm(&rho, eps).unwrap();
        let direct = phase_space_moments(&rho, eps, fermi_radius);
        assert_relative_eq!(direct.mass, rho.mass(), max_relative = 1e-6);
        assert_relative_eq!(direct.kinetic, dm.trace_kinetic, max_relative = 1e-6);
        assert_relative_eq!(dm.derived_density.mass(), rho.mass(), max_relative = 1e-8);
    }
}

#[test]
fn printed_fermi_radius_breaks_the_mass_identity() {
    let grid = Arc::new(RadialGrid::default_log());
    let rho = RadialDensity::gaussian(grid, 1.0, 1.0).unwrap();
    let wrong = phase_space_moments(&rho, 1.0, |v| (6.0 * PI).powf(2.0 / 3.0) * v.cbrt());
    // (4 pi / 3)(6 pi)^2 / (2 pi)^3 = 6
    assert_relative_eq!(wrong.mass, 6.0, max_relative = 1e-6);
}

#[test]
fn smearing_penalty_uses_three_quarters() {
    let grid = Arc::new(RadialGrid::default_log());
    let rho = RadialDensity::gaussian(grid, 3.0, 1.0).unwrap();
    for eps in [0.5, 5.0, 50.0] {
        let dm = phase_space_dm(&rho, eps).unwrap();
        assert_relative_eq!(
            dm.trace_kinetic - dm.fermi_kinetic,
            3.0 * 0.75 / (eps * eps),
            max_relative = 1e-10
        );
    }
}

#[test]
fn hartree_fock_value_examples() {
    let grid = Arc::new(RadialGrid::default_log());
    let sigma = 1.1;
    let rho = RadialDensity::gaussian(grid, 1.0, sigma).unwrap();
    let dm = phase_space_dm(&rho, 0.3).unwrap();

    let edge = hf_upper_value(&dm, &CouplingParams::new(1.0, SQRT_2, 1).unwrap()).unwrap();
    assert_eq!(edge.value, 0.5 * dm.trace_kinetic);
    assert_eq!(edge.terms.get("vacuum"), 0.0);
    let free = hf_upper_value(&dm, &CouplingParams::new(0.0, 0.0, 1).unwrap()).unwrap();
    assert_eq!(free.value, 0.5 * dm.trace_kinetic);
    assert!(matches!(
        hf_upper_value(&dm, &CouplingParams::new(0.1, 1.0, 1).unwrap()),
        Err(Error::RegimeViolated { .. })
    ));

    // as eps -> 0 the Coulomb part tends to that of the Gaussian itself
    let alpha = 0.9;
    let p = CouplingParams::new(alpha, 0.0, 1).unwrap();
    let mut last = f64::INFINITY;
    for eps in [0.1, 0.03, 0.01] {
        let dm = phase_space_dm(&rho, eps).unwrap();
        let r = hf_upper_value(&dm, &p).unwrap();
        let limit = 0.5 * dm.trace_kinetic - SQRT_2 * alpha / 2.0 / (PI.sqrt() * sigma);
        let gap = (r.value - limit).abs();
        assert!(gap < last);
        last = gap;
        assert_eq!(r.reassemble(), r.value);
    }
    assert!(last < 1e-4);
}

#[test]
fn thomas_fermi_bound_vanishes_with_beta() {
    let p = CouplingParams::new(1.0, SQRT_2, 1000).unwrap();
    let r = upper().bound(&p, SmearingWidth::Optimal).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(upper()
        .bound(
            &CouplingParams::new(0.5, 1.0, 10).unwrap(),
            SmearingWidth::Optimal
        )
        .is_err());
    assert!(ThomasFermiUpper::new(solution(), 1.2).is_err());
    assert!(ThomasFermiUpper::new(solution(), 1.0).is_err());
}

#[test]
fn optimal_width_matches_golden_section() {
    let u = upper();
    for n in [1.0, 50.0, 1e4, 1e7] {
        let closed = u.optimal_width(n);
        let total = |ln_eps: f64| {
            let (a, b) = u.error_terms(n, ln_eps.exp());
            a + b
        };
        let (t, best) = golden_section(total, (closed / 100.0).ln(), (closed * 100.0).ln(), 1e-12);
        assert_relative_eq!(t.exp(), closed, max_relative = 1e-5);
        let (a, b) = u.error_terms(n, closed);
        assert!(a + b <= best * (1.0 + 1e-13));
    }
}

#[test]
fn optimized_error_follows_its_exponent() {
    let u = upper();
    let error = |n: f64| {
        let (a, b) = u.error_terms(n, u.optimal_width(n));
        a + b
    };
    let slope = (error(1e8) / error(1e2)).ln() / 1e6f64.ln();
    assert_relative_eq!(
        slope,
        (9.0 + 5.0 * MU) / (3.0 + 3.0 * MU),
        max_relative = 1e-10
    );
}

#[test]
fn thomas_fermi_bound_dominance() {
    let u = upper();
    for n in [1000u64, 1_000_000] {
        let p = CouplingParams::new(2.0, 1.0, n).unwrap();
        let r = u.bound(&p, SmearingWidth::Optimal).unwrap();
        let nf = n as f64;
        let b2 = p.beta() * p.beta();
        let per = r.terms.get("uncapped") / nf.powf(7.0 / 3.0);
        let err = b2 * (r.terms.get("smearing_penalty") + r.terms.get("riesz_error"))
            / nf.powf(7.0 / 3.0);
        assert!((per - b2 * solution().energy).abs() <= err * (1.0 + 1e-12));
        assert_eq!(r.reassemble(), r.value);
        assert!(r.value <= 0.0);
    }
}

#[test]
fn thomas_fermi_bound_is_monotone_in_alpha() {
    let u = upper();
    for n in [10u64, 10_000_000] {
        let mut last = f64::INFINITY;
        for k in 0..30 {
            let alpha = 1.0 / SQRT_2 + 0.2 * k as f64;
            let v = u
                .bound(
                    &CouplingParams::new(alpha, 1.0, n).unwrap(),
                    SmearingWidth::Optimal,
                )
                .unwrap()
                .value;
            assert!(v <= last);
            last = v;
        }
    }
}

#[test]
fn subadditivity_scan_of_the_thomas_fermi_table() {
    let u = upper();
    let table: BTreeMap<u64, f64> = (1..=64)
        .map(|n| {
            (
                n,
                u.bound(
                    &CouplingParams::new(2.0, 1.0, n).unwrap(),
                    SmearingWidth::Optimal,
                )
                .unwrap()
                .value,
            )
        })
        .collect();
    let found = subadditivity_check(&table);
    // oracle: the direct pairwise scan
    let mut expected = Vec::new();
    for n in 1..=64u64 {
        for m in n..=64 {
            if let Some(j) = table.get(&(n + m)) {
                if *j - (table[&n] + table[&m]) > 1e-12 * j.abs().max((table[&n] + table[&m]).abs())
                {
                    expected.push((n, m));
                }
            }
        }
    }
    assert_eq!(
        found.iter().map(|v| (v.n, v.m)).collect::<Vec<_>>(),
        expected
    );

    let linear: BTreeMap<u64, f64> = (1..=64)
        .map(|n| {
            (
                n,
                linear_upper_bound(&CouplingParams::new(0.7, 0.0, n).unwrap()).value,
            )
        })
        .collect();
    assert!(subadditivity_check(&linear).is_empty());
}

#[test]
fn gaussian_trial_beats_the_linear_bound_at_strong_coupling() {
    let range = (1e-4, 1e4);
    let crossover = (1..2000)
        .map(|k| k as f64 * 0.01)
        .find(|&a| pekar_gaussian_n1(a, range).unwrap().value < -a)
        .unwrap();
    assert_relative_eq!(crossover, 3.0 * PI, max_relative = 2e-3);
    let p = CouplingParams::new(10.0, 0.0, 1).unwrap();
    assert!(pekar_gaussian_n1(10.0, range).unwrap().value < linear_upper_bound(&p).value);
}

#[test]
fn repulsive_proof_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let u: f64 = rng.gen_range(0.1..10.0);
        let alpha = rng.gen_range(0.0..0.999) * u / SQRT_2;
        let delta = (u - SQRT_2 * alpha) / (2.0 * u);
        let lhs = u - SQRT_2 * alpha / (1.0 - delta);
        let rhs = (u - SQRT_2 * alpha) / (2.0 * (1.0 - delta));
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
        assert!(lhs > 0.0);
        let r = repulsive_lower_bound(&CouplingParams::new(alpha, u, 3).unwrap()).unwrap();
        assert_relative_eq!(r.terms.get("effective_coupling"), rhs, max_relative = 1e-9);
        assert_eq!(r.reassemble(), r.value);
    }
}

#[test]
fn repulsive_bound_scales_quadratically() {
    let p = |n| CouplingParams::new(0.5, 2.0, n).unwrap();
    let v = |n| repulsive_lower_bound(&p(n)).unwrap().value.abs();
    let slope = (v(1_000_000) / v(100)).ln() / 1e4f64.ln();
    assert!((slope - 2.0).abs() < 0.01, "{slope}");
}

#[test]
fn plan_identity_over_random_plans() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (a, n, k, d) = (
            rng.gen_range(0.01..5.0),
            rng.gen_range(1..1000) as f64,
            rng.gen_range(0.1..100.0),
            rng.gen_range(0.01..0.99),
        );
        let plan = CutoffPlan::new(a, n, k, d).unwrap();
        assert_relative_eq!(
            plan.kappa * plan.k * plan.delta,
            8.0 / 3.0 * a * n * polaron_core::numerics::special::i_infinity(),
            max_relative = 1e-14
        );
    }
}

#[test]
fn consistency_scan_examples() {
    let u = upper();
    let ns: Vec<u64> = vec![1, 10, 100, 1000, 100_000, 10_000_000, 1_000_000_000];
    let good = consistency_scan(2.0, 1.0, &ns, 2.0 * solution().energy.abs(), u).unwrap();
    assert!(good.all_pass());
    assert!(good.coefficient_gap > 0.0);
    assert_eq!(good.rows[0].n, 1);
    let bad = consistency_scan(2.0, 1.0, &ns, 0.0, u).unwrap();
    // with C_G = 0 the lower bound grows like N^{20/9}; it would cross the
    // upper bound only near N ~ 1e21, so the failure shows in the gap
    assert!(bad.coefficient_gap < 0.0);
    assert!(bad.rows.iter().all(|r| r.pass));
}

#[test]
fn records_carry_every_term() {
    let p = CouplingParams::new(2.0, 1.0, 10).unwrap();
    let r = upper().bound(&p, SmearingWidth::Optimal).unwrap();
    let text = r.to_record();
    assert!(text.starts_with("[upper_thm1]\n"));
    for (name, _) in r.terms.iter() {
        assert!(text.contains(&format!("term.{name} = ")));
    }
    let l = collapse_lower_bound(&p, 1.0).unwrap();
    let text = l.to_record();
    assert!(text.contains("C_G = 1e0"));
    assert!(text.contains("plan.kappa = "));
    assert_eq!(l.to_csv_row().split(',').count(), 6);
}
