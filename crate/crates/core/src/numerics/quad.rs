//! One-dimensional quadrature: adaptive Gauss-Kronrod, Gauss-Legendre rules
//! and the trapezoid end corrections for algebraic singularities.

use super::special::zeta;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> QuadResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    QuadResult {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
        };
    }
    let mut segments = vec![(a, b, kronrod15(&f, a, b))];
    for _ in 0..2000 {
        let value: f64 = segments.iter().map(|s| s.2.value).sum();
        let error: f64 = segments.iter().map(|s| s.2.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            break;
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("nonempty");
        let (lo, hi, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        segments.push((lo, mid, kronrod15(&f, lo, mid)));
        segments.push((mid, hi, kronrod15(&f, mid, hi)));
    }
    QuadResult {
        value: segments.iter().map(|s| s.2.value).sum(),
        error: segments.iter().map(|s| s.2.error).sum(),
    }
}

/// Integral over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> QuadResult {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let v = f(a + t / s) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, abs_tol, rel_tol)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = nf * (x * p - p0) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Leading correction for the one-sided trapezoid sum `h * sum_{n>=1} f(nh)`
/// of `f(x) = x^a phi(x)`: the sum exceeds the integral by
/// `zeta(-a) phi(0) h^{1+a} + zeta(-a-2) phi''(0)/2 h^{3+a}` (odd terms vanish
/// for even `phi`).
pub fn endpoint_power_correction(a: f64, phi0: f64, half_phi2: f64, h: f64) -> f64 {
    zeta(-a) * phi0 * h.powf(1.0 + a) + zeta(-a - 2.0) * half_phi2 * h.powf(3.0 + a)
}

/// Leading correction for a two-sided trapezoid sum across an interior node
/// where the integrand behaves like `|x - x_0|^a phi(x)` (the node itself
/// contributes zero): the sum exceeds the integral by `2 zeta(-a) phi h^{1+a}`.
pub fn interior_power_correction(a: f64, phi: f64, h: f64) -> f64 {
    2.0 * zeta(-a) * phi * h.powf(1.0 + a)
}
