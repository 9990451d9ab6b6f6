//! Lower bounds on the ground-state energy.
//!
//! Both the collapse bound (`sqrt2 alpha >= U`) and the repulsive bound
//! (`sqrt2 alpha < U`) start from the same two operator inequalities:
//!
//! 1. removing the phonons above a Gaussian cutoff `K` costs a fraction
//!    `kappa = 8 alpha N I_inf / (3 K delta)` of the kinetic energy, a
//!    fraction `delta` of the field energy and the constant `3 / (2 delta)`;
//! 2. completing the square in the remaining field leaves the pair
//!    potential `-(sqrt2 alpha / (1 - delta) - U) V_C` and the self-energy
//!    `2 alpha N K / sqrt(pi)`.
//!
//! Only the scalar consequences are evaluated here.

use std::f64::consts::{PI, SQRT_2};

use crate::numerics::special::{c_lt, i_infinity};
use crate::report::{BoundKind, LowerBoundReport, Terms};
use crate::upper::{SmearingWidth, ThomasFermiUpper};
use crate::{CouplingParams, Error, Result};

/// Parameters of the phonon cutoff step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPlan {
    pub k: f64,
    pub delta: f64,
    /// `8 alpha N I_inf / (3 K delta)`
    pub kappa: f64,
    /// `3 / (2 delta)`
    pub error_const: f64,
}

impl CutoffPlan {
    pub fn new(alpha: f64, n: f64, k: f64, delta: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::OutOfRange {
                name: "K",
                value: k,
                range: "(0, inf)",
            });
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: "(0, 1)",
            });
        }
        Ok(Self {
            k,
            delta,
            kappa: 8.0 * alpha * n * i_infinity() / (3.0 * k * delta),
            error_const: 3.0 / (2.0 * delta),
        })
    }
}

/// Result of completing the square below the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    /// `sqrt2 alpha / (1 - delta) - U`, the strength of the residual
    /// attraction `-coupling V_C`.
    pub coupling: f64,
    /// `2 alpha N K / sqrt(pi)`.
    pub self_energy: f64,
    /// `alpha N K / ((1 - delta) sqrt(pi))`, which the simplified form bounds.
    pub sharp_self_energy: f64,
}

pub fn step2_effective(p: &CouplingParams, plan: &CutoffPlan) -> Result<EffectiveCoupling> {
    if plan.delta > 0.5 {
        return Err(Error::OutOfRange {
            name: "delta",
            value: plan.delta,
            range: "(0, 1/2]",
        });
    }
    let (a, n) = (p.alpha(), p.n_f64());
    Ok(EffectiveCoupling {
        coupling: SQRT_2 * a / (1.0 - plan.delta) - p.u(),
        self_energy: 2.0 * a * n * plan.k / PI.sqrt(),
        sharp_self_energy: a * n * plan.k / ((1.0 - plan.delta) * PI.sqrt()),
    })
}

fn check_constant(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0 && value.is_finite()) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, inf)",
        });
    }
    Ok(())
}

/// `E_N >= -C_G beta^2 N^{7/3} - (18 C_G + 32 / 3 pi) alpha^2 N^{20/9} - 3 N^{1/9}`
/// for `sqrt2 alpha >= U`, with `delta = kappa = N^{-1/9} / 2` and
/// `K = (32/3) I_inf alpha N^{11/9}`.
///
/// `C_G` is the constant of `inf spec(sum -Delta/2 - V_C) >= -C_G N^{7/3}`.
/// The last term is the constant `3 / (2 delta)` from the cutoff step. Each
/// line of the chain of estimates is kept in the terms (`line0` to `line3`,
/// weakly decreasing); `line3` is the value.
pub fn collapse_lower_bound(p: &CouplingParams, c_g: f64) -> Result<LowerBoundReport> {
    check_constant("C_G", c_g)?;
    if SQRT_2 * p.alpha() < p.u() {
        return Err(Error::RegimeViolated {
            bound: "collapse lower bound",
            required: "sqrt(2) alpha >= U",
            alpha: p.alpha(),
            u: p.u(),
        });
    }
    let (a, n, beta) = (p.alpha(), p.n_f64(), p.beta());
    let mut terms = Terms::new();
    let leading_power = n.powf(7.0 / 3.0);
    let sub_power = n.powf(20.0 / 9.0);
    if a == 0.0 {
        // U = 0 as well: free fermions, no phonon step needed
        terms
            .push("leading", 0.0)
            .push("subleading", 0.0)
            .push("error_const", 0.0);
        return Ok(LowerBoundReport {
            kind: BoundKind::CollapseLower,
            params: *p,
            plan: None,
            value: assemble(BoundKind::CollapseLower, &terms),
            terms,
            c_g: Some(c_g),
            c_l: None,
            formula: "leading + subleading - error_const",
        });
    }
    let delta = 0.5 * n.powf(-1.0 / 9.0);
    let k = 32.0 / 3.0 * i_infinity() * a * n.powf(11.0 / 9.0);
    let plan = CutoffPlan::new(a, n, k, delta)?;
    let step = step2_effective(p, &plan)?;
    let kappa = plan.kappa;
    let e = plan.error_const;
    let pair = 32.0 / (3.0 * PI) * a * a * sub_power;
    let line0 =
        -c_g * step.coupling * step.coupling / (1.0 - kappa) * leading_power - step.self_energy - e;
    let widened = SQRT_2 * a * (1.0 + 2.0 * delta) - p.u();
    let line1 = -c_g * widened * widened * (1.0 + 2.0 * kappa) * leading_power - pair - e;
    let line2 = -c_g * (beta * beta + 16.0 * a * a * delta) * (1.0 + 2.0 * kappa) * leading_power
        - pair
        - e;
    terms
        .push("delta", delta)
        .push("K", k)
        .push("kappa", kappa)
        .push("coupling", step.coupling)
        .push("self_energy", step.self_energy)
        .push("line0", line0)
        .push("line1", line1)
        .push("line2", line2)
        .push("leading", -c_g * beta * beta * leading_power)
        .push(
            "subleading",
            -(18.0 * c_g + 32.0 / (3.0 * PI)) * a * a * sub_power,
        )
        .push("error_const", e);
    let value = assemble(BoundKind::CollapseLower, &terms);
    terms.push("line3", value);
    Ok(LowerBoundReport {
        kind: BoundKind::CollapseLower,
        params: *p,
        plan: Some(plan),
        value,
        terms,
        c_g: Some(c_g),
        c_l: None,
        formula: "leading + subleading - error_const",
    })
}

/// `E_N >= -(16 alpha^2 N^2 / (3 pi) + 3) U / (U - sqrt2 alpha)` for
/// `sqrt2 alpha < U`, with `delta = (U - sqrt2 alpha) / 2U` and `K` chosen so
/// that `kappa = 1`.
pub fn repulsive_lower_bound(p: &CouplingParams) -> Result<LowerBoundReport> {
    let (a, u, n) = (p.alpha(), p.u(), p.n_f64());
    if !(SQRT_2 * a < u) {
        return Err(Error::RegimeViolated {
            bound: "repulsive lower bound",
            required: "sqrt(2) alpha < U",
            alpha: a,
            u,
        });
    }
    let delta = (u - SQRT_2 * a) / (2.0 * u);
    let mut terms = Terms::new();
    terms
        .push("delta", delta)
        .push("effective_coupling", u - SQRT_2 * a / (1.0 - delta))
        .push("phonon_coeff", 16.0 * a * a * n * n / (3.0 * PI))
        .push("constant", 3.0)
        .push("prefactor", u / (u - SQRT_2 * a));
    let plan = if a > 0.0 {
        let k = 8.0 * a * n * i_infinity() / (3.0 * delta);
        let plan = CutoffPlan::new(a, n, k, delta)?;
        let self_energy = step2_effective(p, &plan)?.self_energy;
        terms
            .push("K", k)
            .push("kappa", plan.kappa)
            .push("self_energy", -self_energy)
            .push("cutoff_error", -plan.error_const)
            .push("sharp_value", -self_energy - plan.error_const);
        Some(plan)
    } else {
        // no phonons to cut off; only the constant survives
        terms.push("cutoff_error", -1.5 / delta);
        None
    };
    Ok(LowerBoundReport {
        kind: BoundKind::RepulsiveLower,
        params: *p,
        plan,
        value: assemble(BoundKind::RepulsiveLower, &terms),
        terms,
        c_g: None,
        c_l: None,
        formula: "-(phonon_coeff + constant) * prefactor",
    })
}

/// `(40/3) (2 / (3 pi))^{2/3}`.
pub fn product_state_constant() -> f64 {
    40.0 / 3.0 * (2.0 / (3.0 * PI)).powf(2.0 / 3.0)
}

/// `<f x eta, H f x eta> >= -c_L (40/3) (2/(3 pi))^{2/3} N` for
/// `sqrt2 alpha <= U`, `U > 0`.
///
/// The terms also carry the chain this comes from: the Lieb-Thirring
/// constant, the width `eps = 2 c_LT / (U c_L)` of the split
/// `int rho^{4/3} <= (eps int rho^{5/3} + N / eps) / 2`, and the value
/// `-U c_L N / (2 eps)` it leaves when the Lieb-Oxford term carries the
/// factor `U`.
pub fn product_state_lower_bound(p: &CouplingParams, c_l: f64) -> Result<LowerBoundReport> {
    check_constant("c_L", c_l)?;
    let (a, u, n) = (p.alpha(), p.u(), p.n_f64());
    if !(SQRT_2 * a <= u && u > 0.0) {
        return Err(Error::RegimeViolated {
            bound: "product-state lower bound",
            required: "sqrt(2) alpha <= U and U > 0",
            alpha: a,
            u,
        });
    }
    let lt = c_lt();
    let eps = 2.0 * lt / (u * c_l);
    let mut terms = Terms::new();
    terms
        .push("c_L", c_l)
        .push("N", n)
        .push("constant", product_state_constant())
        .push("c_LT", lt)
        .push("split_eps", eps)
        .push("split_rho53_coeff", u * c_l * eps / 2.0)
        .push("split_mass_term", -u * c_l * n / (2.0 * eps));
    Ok(LowerBoundReport {
        kind: BoundKind::ProductStateLower,
        params: *p,
        plan: None,
        value: assemble(BoundKind::ProductStateLower, &terms),
        terms,
        c_g: None,
        c_l: Some(c_l),
        formula: "-c_L * constant * N",
    })
}

pub(crate) fn assemble(kind: BoundKind, t: &Terms) -> f64 {
    match kind {
        BoundKind::CollapseLower => t.get("leading") + t.get("subleading") - t.get("error_const"),
        BoundKind::RepulsiveLower => {
            -(t.get("phonon_coeff") + t.get("constant")) * t.get("prefactor")
        }
        BoundKind::ProductStateLower => -(t.get("c_L") * t.get("constant") * t.get("N")),
        other => panic!("{} is not a lower bound", other.tag()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: u64,
    pub upper: f64,
    pub lower: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyScan {
    pub rows: Vec<ScanRow>,
    /// `C_G - |E_PTF|`; the two bounds have leading coefficients
    /// `beta^2 E_PTF` and `-C_G beta^2`, so a negative gap means the lower
    /// bound eventually exceeds the upper one.
    pub coefficient_gap: f64,
}

impl ConsistencyScan {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Compares the Thomas-Fermi upper bound with the collapse lower bound for
/// each `N` (which a correct `C_G` must satisfy).
pub fn consistency_scan(
    alpha: f64,
    u: f64,
    ns: &[u64],
    c_g: f64,
    upper: &ThomasFermiUpper,
) -> Result<ConsistencyScan> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let p = CouplingParams::new(alpha, u, n)?;
        let hi = upper.bound(&p, SmearingWidth::Optimal)?.value;
        let lo = collapse_lower_bound(&p, c_g)?.value;
        rows.push(ScanRow {
            n,
            upper: hi,
            lower: lo,
            pass: hi >= lo,
        });
    }
    Ok(ConsistencyScan {
        rows,
        coefficient_gap: c_g - upper.e_ptf().abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn plan_identity() {
        let plan = CutoffPlan::new(1.3, 7.0, 2.5, 0.3).unwrap();
        assert_relative_eq!(
            plan.kappa * plan.k * plan.delta,
            8.0 / 3.0 * 1.3 * 7.0 * i_infinity(),
            max_relative = 1e-15
        );
        assert_eq!(plan.error_const, 5.0);
        assert!(CutoffPlan::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(CutoffPlan::new(1.0, 1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn step_two_examples() {
        let p = CouplingParams::new(1.0, 0.0, 1).unwrap();
        let plan = CutoffPlan::new(1.0, 1.0, 1.0, 0.5).unwrap();
        let s = step2_effective(&p, &plan).unwrap();
        assert_relative_eq!(s.self_energy, 2.0 / PI.sqrt(), max_relative = 1e-15);
        assert!(s.sharp_self_energy <= s.self_energy);
        let tiny = CutoffPlan::new(1.0, 1.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(
            step2_effective(&p, &tiny).unwrap().coupling,
            SQRT_2,
            max_relative = 1e-11
        );
        let edge = CouplingParams::new(1.0, 2.0 * SQRT_2, 1).unwrap();
        assert!(step2_effective(&edge, &plan).unwrap().coupling.abs() < 1e-15);
        let wide = CutoffPlan::new(1.0, 1.0, 1.0, 0.6).unwrap();
        assert!(step2_effective(&p, &wide).is_err());
    }

    #[test]
    fn collapse_bound_at_one_electron() {
        let c_g = 0.7;
        let r = collapse_lower_bound(&CouplingParams::new(1.0, 0.0, 1).unwrap(), c_g).unwrap();
        // beta^2 = 2, delta = 1/2
        let expected = -2.0 * c_g - 18.0 * c_g - 32.0 / (3.0 * PI) - 3.0;
        assert_relative_eq!(r.value, expected, max_relative = 1e-14);
        let plan = r.plan.unwrap();
        assert_relative_eq!(plan.kappa, plan.delta, max_relative = 1e-14);
        assert_eq!(r.reassemble(), r.value);
    }

    #[test]
    fn collapse_chain_decreases() {
        for (a, u, n) in [
            (1.0, 0.0, 1),
            (2.0, 1.0, 10),
            (0.8, 1.1, 1000),
            (3.0, 0.5, 123_456),
        ] {
            let r = collapse_lower_bound(&CouplingParams::new(a, u, n).unwrap(), 1.0).unwrap();
            let t = &r.terms;
            let lines = ["line0", "line1", "line2", "line3"].map(|l| t.get(l));
            for w in lines.windows(2) {
                assert!(w[0] >= w[1] * (1.0 + 1e-14), "{lines:?}");
            }
            assert_relative_eq!(t.get("kappa"), t.get("delta"), max_relative = 1e-14);
        }
    }

    #[test]
    fn collapse_bound_on_the_boundary() {
        let p = CouplingParams::new(1.0, SQRT_2, 8).unwrap();
        let r = collapse_lower_bound(&p, 1.0).unwrap();
        assert_eq!(r.terms.get("leading"), 0.0);
        let sub = -(18.0 + 32.0 / (3.0 * PI)) * 8f64.powf(20.0 / 9.0);
        assert_relative_eq!(
            r.value,
            sub - 3.0 * 8f64.powf(1.0 / 9.0),
            max_relative = 1e-14
        );
        assert!(collapse_lower_bound(&CouplingParams::new(0.5, 1.0, 1).unwrap(), 1.0).is_err());
    }

    #[test]
    fn repulsive_bound_examples() {
        let r = repulsive_lower_bound(&CouplingParams::new(1.0, 2.0, 1).unwrap()).unwrap();
        let direct = -(16.0 / (3.0 * PI) + 3.0) * 2.0 / (2.0 - SQRT_2);
        let expanded = -16.0 / (3.0 * PI) * 2.0 / (2.0 - SQRT_2) - 6.0 / (2.0 - SQRT_2);
        assert_relative_eq!(r.value, direct, max_relative = 1e-14);
        assert_relative_eq!(r.value, expanded, max_relative = 1e-14);
        assert!(r.terms.get("sharp_value") >= r.value);
        assert_relative_eq!(r.plan.unwrap().kappa, 1.0, max_relative = 1e-14);
        let free = repulsive_lower_bound(&CouplingParams::new(0.0, 1.0, 4).unwrap()).unwrap();
        assert_eq!(free.value, -3.0);
        assert!(free.plan.is_none());
        let near =
            repulsive_lower_bound(&CouplingParams::new(1.0, SQRT_2 + 1e-9, 1).unwrap()).unwrap();
        assert!(near.value < -1e8);
        assert!(repulsive_lower_bound(&CouplingParams::new(1.0, SQRT_2, 1).unwrap()).is_err());
    }

    #[test]
    fn product_state_bound() {
        let p = CouplingParams::new(0.5, 1.0, 1).unwrap();
        let r = product_state_lower_bound(&p, 1.68).unwrap();
        let power = (2.0 / (3.0 * PI)).powf(2.0 / 3.0);
        let power2 = ((2.0 / (3.0 * PI)).ln() * 2.0 / 3.0).exp();
        assert_relative_eq!(power, power2, max_relative = 1e-14);
        assert_relative_eq!(r.value, -1.68 * 40.0 / 3.0 * power2, max_relative = 1e-14);
        let double = product_state_lower_bound(&p.with_n(2).unwrap(), 1.68).unwrap();
        assert_eq!(double.value, 2.0 * r.value);
        let half = product_state_lower_bound(&p, 0.84).unwrap();
        assert_eq!(half.value, 0.5 * r.value);
        // the split removes the rho^{5/3} term exactly
        assert_relative_eq!(
            r.terms.get("split_rho53_coeff"),
            c_lt(),
            max_relative = 1e-14
        );
        assert!(
            product_state_lower_bound(&CouplingParams::new(1.0, 1.0, 1).unwrap(), 1.68).is_err()
        );
        assert!(
            product_state_lower_bound(&CouplingParams::new(0.0, 0.0, 1).unwrap(), 1.68).is_err()
        );
    }
}
