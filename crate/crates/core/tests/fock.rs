use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use polaron_core::fock::*;
use polaron_core::numerics::quad::integrate;
use polaron_core::numerics::special::c0;
use polaron_core::numerics::{radial_fourier, RadialDensity, RadialGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn truncation_is_variational_and_monotone() {
    let exact = quadratic_min_exact(1.0, 1.0).unwrap();
    let mut last_gap = f64::INFINITY;
    for n_max in 1..=80 {
        let p = TruncatedFockProblem::new(c(1.0, 0.0), 1.0, n_max).unwrap();
        let e = truncated_ground_energy(&p);
        let gap = e - exact;
        assert!(gap >= -1e-15, "n_max = {n_max}: {e}");
        assert!(gap <= last_gap + 1e-15, "n_max = {n_max}");
        last_gap = gap;
    }
    let p = TruncatedFockProblem::new(c(1.0, 0.0), 1.0, DEFAULT_N_MAX).unwrap();
    assert!((truncated_ground_energy(&p) + 1.0).abs() < 1e-8);
}

#[test]
fn bisection_agrees_with_dense_diagonalization() {
    let p = TruncatedFockProblem::new(c(0.4, -0.9), 0.8, 25).unwrap();
    let d = p.dim();
    let rows = p.dense();
    let m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
    let eig = m.symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    assert_relative_eq!(truncated_ground_energy(&p), min, max_relative = 1e-12);
}

fn kron_identity(a: &DMatrix<Complex64>, left: usize, right: usize) -> DMatrix<Complex64> {
    let d = a.nrows();
    DMatrix::from_fn(left * d * right, left * d * right, |i, j| {
        let (li, ri, ai) = (i / (d * right), i % right, (i / right) % d);
        let (lj, rj, aj) = (j / (d * right), j % right, (j / right) % d);
        if li == lj && ri == rj {
            a[(ai, aj)]
        } else {
            c(0.0, 0.0)
        }
    })
}

#[test]
fn modes_decouple() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let count: usize = rng.gen_range(2..=3);
        let n_max: usize = rng.gen_range(3..=6);
        let modes: Vec<Mode> = (0..count)
            .map(|j| Mode {
                k: j as f64 + 1.0,
                weight: rng.gen_range(0.2..2.0),
                f: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            })
            .collect();
        let set = ModeSet::new(modes, rng.gen_range(0.5..2.0)).unwrap();
        let d: usize = n_max + 1;
        let total_dim = d.pow(count as u32);
        let mut h = DMatrix::from_element(total_dim, total_dim, c(0.0, 0.0));
        let mut separate = 0.0;
        for j in 0..count {
            let p = set.single_mode(j, n_max).unwrap();
            separate += truncated_ground_energy(&p);
            let rows = p.dense();
            let block = DMatrix::from_fn(d, d, |a, b| rows[a][b]);
            h += kron_identity(&block, d.pow(j as u32), d.pow((count - 1 - j) as u32));
        }
        let min = h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(min, separate, max_relative = 1e-11);
    }
}

#[test]
fn no_coherent_state_beats_the_optimal_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let modes: Vec<Mode> = (0..6)
        .map(|j| Mode {
            k: j as f64,
            weight: rng.gen_range(0.1..1.0),
            f: c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        })
        .collect();
    let set = ModeSet::new(modes, 1.3).unwrap();
    let (f0, i0) = coherent_expectations(&set, &set.optimal_amplitudes()).unwrap();
    let best = f0 + i0;
    assert_relative_eq!(best, -set.coupling_norm_sq() / 1.3, max_relative = 1e-14);
    for _ in 0..1000 {
        let z: Vec<Complex64> = (0..6)
            .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let (f, i) = coherent_expectations(&set, &z).unwrap();
        assert!(f + i >= best);
    }
}

fn continuum(rho: &RadialDensity, top: f64, alpha: f64) -> f64 {
    let c = c0();
    let radial = integrate(|k| radial_fourier(rho, k).powi(2), 0.0, top, 1e-14, 1e-12).value;
    -alpha / (c * c) * 4.0 * PI * radial
}

#[test]
fn discretized_self_energy_of_a_gaussian() {
    let grid = Arc::new(RadialGrid::default_log());
    let sigma = 1.2;
    let alpha = 1.3;
    let rho = RadialDensity::gaussian(grid, 1.0, sigma).unwrap();
    let e512 = discretized_polaron_self_energy(&rho, f64::INFINITY, 512, alpha).unwrap();
    let e256 = discretized_polaron_self_energy(&rho, f64::INFINITY, 256, alpha).unwrap();
    assert!((e512 - e256).abs() < 1e-6 * e512.abs());
    assert_relative_eq!(
        e512,
        -SQRT_2 * alpha / 2.0 / (PI.sqrt() * sigma),
        max_relative = 1e-5
    );
    assert_relative_eq!(e512, continuum(&rho, 40.0, alpha), max_relative = 1e-5);
    assert_eq!(
        discretized_polaron_self_energy(&rho, f64::INFINITY, 64, 0.0).unwrap(),
        0.0
    );
    assert!(discretized_polaron_self_energy(&rho, f64::INFINITY, 4, 1.0).is_err());
}

#[test]
fn discretized_self_energy_with_a_cutoff() {
    let grid = Arc::new(RadialGrid::default_log());
    let rho = RadialDensity::gaussian_mixture(grid, &[(0.4, 0.7), (0.6, 1.9)]).unwrap();
    let e = discretized_polaron_self_energy(&rho, 2.0, 512, 0.8).unwrap();
    assert_relative_eq!(e, continuum(&rho, 2.0, 0.8), max_relative = 1e-5);
}
