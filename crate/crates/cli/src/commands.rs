//! The `constants`, `ptf` and `bounds` subcommands.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use polaron_core::lower::product_state_constant;
use polaron_core::numerics::special::{a_mu, c0, c_lt, c_mu, c_tf, i_infinity};
use polaron_core::numerics::{i_cutoff, nelson_self_energy, RadialDensity};
use polaron_core::ptf::{best_gaussian_width, minimize_direct, ptf_bracket, PtfSolution};

use crate::output::{num, table, write_file};
use crate::sweep::{shooting_solution, Evaluator, CSV_HEADER, C_G_WARNING};
use crate::{CliError, Outcome, RunConfig};

fn sci(x: f64) -> String {
    format!("{x:.15e}")
}

fn diff(a: f64, b: f64) -> String {
    format!("|diff| = {:.2e}", (a - b).abs())
}

/// Gradient-descent minimizer started from the best Gaussian.
pub fn gradient_solution(config: &RunConfig) -> Result<PtfSolution, CliError> {
    let grid = config.grid()?;
    let init = RadialDensity::gaussian(grid.clone(), 1.0, best_gaussian_width())?;
    Ok(minimize_direct(
        grid,
        &init,
        config.gradient_max_iters,
        config.gradient_step,
    )?)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn constants(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut row = |name: &str, value: f64, formula: &str, check: String| {
        rows.push(vec![
            name.to_string(),
            sci(value),
            formula.to_string(),
            check,
        ]);
    };
    row("c_0", c0(), "2^{3/4} pi", String::new());
    let quad = i_cutoff(f64::INFINITY);
    row(
        "I_inf",
        i_infinity(),
        "(sqrt2 - 1) / sqrt(pi)",
        format!("quadrature {}, {}", sci(quad), diff(quad, i_infinity())),
    );
    for lambda in [0.1, 1.0, 10.0, 100.0] {
        let e = nelson_self_energy(lambda);
        let closed = 2.0 / PI * (lambda / SQRT_2).atan();
        row(
            &format!("e_Lambda({})", num(lambda)),
            e,
            "(1/c_0^2) int_{|k|<=Lambda} dk / (k^2 (1 + k^2/2))",
            format!(
                "(2/pi) atan(Lambda/sqrt2) = {}, {}",
                sci(closed),
                diff(e, closed)
            ),
        );
    }
    let e_inf = nelson_self_energy(f64::INFINITY);
    row(
        "e_inf",
        e_inf,
        "limit of e_Lambda",
        format!("1, {}", diff(e_inf, 1.0)),
    );
    for (label, mu) in [("1/2", 0.5), ("1", 1.0), ("37/31", 37.0 / 31.0)] {
        row(
            &format!("c_mu({label})"),
            c_mu(mu),
            "pi^{-mu/2} Gamma(mu/2)",
            String::new(),
        );
        row(
            &format!("a_mu({label})"),
            a_mu(mu),
            "(4pi/3)^{mu/3} q^{1+mu/3} (q-1)^{mu/2-1}, q = 6/(5mu)",
            String::new(),
        );
    }
    row("c_LT", c_lt(), "(3/10) (3pi/2)^{2/3}", String::new());
    row("c_TF", c_tf(), "(3/10) (6pi^2)^{2/3}", String::new());
    row(
        "c_L",
        config.c_l,
        "Lieb-Oxford constant (configured)",
        String::new(),
    );
    row(
        "product-state constant",
        product_state_constant(),
        "(40/3) (2/(3pi))^{2/3}",
        String::new(),
    );
    let shooting = shooting_solution(config)?;
    let gradient = gradient_solution(config)?;
    let bracket = ptf_bracket();
    row(
        "E_PTF (shooting)",
        shooting.energy,
        "Lane-Emden index 3/2: -(3/7) / R",
        format!("bracket [{}, {}]", sci(bracket.lower), sci(bracket.upper)),
    );
    row(
        "E_PTF (gradient)",
        gradient.energy,
        "projected gradient descent on the grid",
        format!(
            "relative gap to shooting {:.2e}",
            relative_gap(shooting.energy, gradient.energy)
        ),
    );
    Ok(table(&["quantity", "value", "formula", "check"], &rows).into())
}

pub fn ptf(config: &RunConfig) -> Result<Outcome, CliError> {
    let shooting = shooting_solution(config)?;
    let gradient = gradient_solution(config)?;
    let gap = relative_gap(shooting.energy, gradient.energy);
    let bracket = ptf_bracket();
    let mut failures = Vec::new();
    if !(gap < config.ptf_agreement) {
        failures.push(format!(
            "solver agreement {gap:e} exceeds {}",
            config.ptf_agreement
        ));
    }
    for s in [&shooting, &gradient] {
        if !(s.virial_defect < config.virial_tolerance) {
            failures.push(format!(
                "{} virial defect {:e} exceeds {}",
                s.method.as_str(),
                s.virial_defect,
                config.virial_tolerance
            ));
        }
        if !(bracket.lower <= s.energy && s.energy <= bracket.upper) {
            failures.push(format!(
                "{} energy {} outside the analytic bracket",
                s.method.as_str(),
                s.energy
            ));
        }
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "e_ptf_shooting = {}", num(shooting.energy));
    let _ = writeln!(summary, "e_ptf_gradient = {}", num(gradient.energy));
    let _ = writeln!(summary, "relative_gap = {gap:e}");
    let _ = writeln!(
        summary,
        "agreement_tolerance = {}",
        num(config.ptf_agreement)
    );
    let _ = writeln!(summary, "virial_shooting = {:e}", shooting.virial_defect);
    let _ = writeln!(summary, "virial_gradient = {:e}", gradient.virial_defect);
    let _ = writeln!(
        summary,
        "virial_tolerance = {}",
        num(config.virial_tolerance)
    );
    let _ = writeln!(summary, "gradient_iterations = {}", gradient.iterations);
    let _ = writeln!(
        summary,
        "bracket = [{}, {}]",
        num(bracket.lower),
        num(bracket.upper)
    );
    let _ = writeln!(
        summary,
        "status = {}",
        if failures.is_empty() { "pass" } else { "fail" }
    );

    let dir = &config.out;
    let mut text = summary.clone();
    for (name, contents) in [
        ("ptf_shooting.txt", shooting.to_record()),
        ("ptf_gradient.txt", gradient.to_record()),
        ("ptf_summary.txt", summary),
    ] {
        let _ = writeln!(
            text,
            "wrote {}",
            write_file(dir, name, &contents)?.display()
        );
    }
    let failure = if failures.is_empty() {
        None
    } else {
        Some(failures.join("; "))
    };
    Ok(Outcome { text, failure })
}

pub fn bounds<E: std::io::Write>(config: &RunConfig, stderr: &mut E) -> Result<Outcome, CliError> {
    let p =
        polaron_core::CouplingParams::with_cutoff(config.alpha, config.u, config.n, config.lambda)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    let attractive = SQRT_2 * p.alpha() >= p.u();
    if attractive && config.c_g_is_default {
        let _ = writeln!(stderr, "{C_G_WARNING}");
    }
    let set = Evaluator::new(config, attractive)?.evaluate(&p)?;
    let row = set.row();
    let records = set.records();
    let csv = format!("{CSV_HEADER}\n{}\n", row.to_csv());
    let mut text = format!("regime = {}\n\n{records}\n{csv}", p.regime().as_str());
    let dir = &config.out;
    let _ = writeln!(
        text,
        "wrote {}",
        write_file(dir, "bounds.txt", &records)?.display()
    );
    let _ = writeln!(
        text,
        "wrote {}",
        write_file(dir, "bounds.csv", &csv)?.display()
    );
    let bad = row.violations();
    let failure = if bad.is_empty() {
        None
    } else {
        Some(format!("{}: {}", row.label(), bad.join("; ")))
    };
    Ok(Outcome { text, failure })
}
