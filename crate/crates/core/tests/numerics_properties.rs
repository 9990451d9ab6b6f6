use std::f64::consts::PI;
use std::sync::Arc;

use polaron_core::numerics::special::erf;
use polaron_core::numerics::{
    coulomb_energy, coulomb_energy_fourier, hls_checks, smeared_kernel, RadialDensity, RadialGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mixture(rng: &mut ChaCha8Rng, grid: Arc<RadialGrid>) -> RadialDensity {
    let count = rng.gen_range(1..=4);
    let components: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(0.1..3.0), rng.gen_range(0.3..3.0)))
        .collect();
    RadialDensity::gaussian_mixture(grid, &components).unwrap()
}

// Smooth profiles that are not Gaussian mixtures: r^{2m} e^{-r^2 / s^2}
// plus a Gaussian core.
fn random_profile(rng: &mut ChaCha8Rng, grid: Arc<RadialGrid>) -> RadialDensity {
    if rng.gen_bool(0.5) {
        return random_mixture(rng, grid);
    }
    let m: i32 = rng.gen_range(1..=3);
    let s = rng.gen_range(0.5..2.5);
    let core = rng.gen_range(0.0..1.0);
    let w = rng.gen_range(0.4..1.5);
    RadialDensity::from_fn(grid, move |r| {
        r.powi(2 * m) * (-(r * r) / (s * s)).exp() + core * (-(r * r) / (w * w)).exp()
    })
    .unwrap()
}

#[test]
fn hardy_littlewood_sobolev_on_random_densities() {
    let grid = Arc::new(RadialGrid::default_log());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mus: Vec<f64> = (0..10).map(|_| rng.gen_range(0.1..1.19)).collect();
    for i in 0..100 {
        let rho = random_profile(&mut rng, grid.clone());
        for (mu, check) in mus.iter().zip(hls_checks(&rho, &mus).unwrap()) {
            assert!(check.holds, "density {i}, mu = {mu}: {check:?}");
            assert!(check.lhs > 0.0);
        }
    }
}

#[test]
fn smeared_kernel_stays_below_newton() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let k = 10f64.powf(rng.gen_range(-2.0..2.0));
        let r = 10f64.powf(rng.gen_range(-2.0..2.0));
        let v = smeared_kernel(k, r);
        let newton = 2.0 * PI * PI / r;
        let closed = newton * erf(k * r / 2f64.sqrt());
        assert!(v <= newton, "K = {k}, r = {r}: {v} vs {newton}");
        // strict wherever the gap is representable
        if newton - closed > 4.0 * f64::EPSILON * newton {
            assert!(v < newton, "K = {k}, r = {r}");
        }
        assert!((v - closed).abs() <= 1e-10 * newton, "K = {k}, r = {r}");
    }
}

#[test]
fn coulomb_energy_real_space_matches_fourier() {
    let grid = Arc::new(RadialGrid::default_log());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..50 {
        let rho = random_mixture(&mut rng, grid.clone());
        let real = coulomb_energy(&rho, &rho).unwrap();
        let fourier = coulomb_energy_fourier(&rho);
        assert!(
            (real - fourier).abs() <= 1e-6 * real,
            "mixture {i}: {real} vs {fourier}"
        );
    }
}
