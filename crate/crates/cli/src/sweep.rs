//! Bound evaluation per `(alpha, U, N)`, the sweep table, slope fits and
//! the sweep plots.

use std::fmt::Write as _;

use polaron_core::lower::{collapse_lower_bound, product_state_lower_bound, repulsive_lower_bound};
use polaron_core::ptf::{minimizer_on_grid, solve_lane_emden, PtfSolution};
use polaron_core::report::{LowerBoundReport, UpperBoundReport};
use polaron_core::upper::{linear_upper_bound, SmearingWidth, ThomasFermiUpper};
use polaron_core::{CouplingParams, Regime};

use crate::output::{num, opt_num, table, write_file};
use crate::plot::{heatmap, loglog, HeatMap, Series};
use crate::{CliError, Outcome, RunConfig};

pub const CSV_HEADER: &str =
    "alpha,U,N,regime,upper_thm1,upper_thm4,lower_thm2,lower_thm3,lower_mainA";

pub const C_G_WARNING: &str =
    "warning: C_G = 1 is a placeholder; the collapse constant is not computed here (set c_g or --cg)";

/// Every bound that applies to one parameter point.
#[derive(Debug, Clone)]
pub struct BoundSet {
    pub params: CouplingParams,
    pub upper_thm1: Option<UpperBoundReport>,
    pub upper_thm4: UpperBoundReport,
    pub lower_thm2: Option<LowerBoundReport>,
    pub lower_thm3: Option<LowerBoundReport>,
    pub lower_main_a: Option<LowerBoundReport>,
}

impl BoundSet {
    pub fn row(&self) -> SweepRow {
        SweepRow {
            alpha: self.params.alpha(),
            u: self.params.u(),
            n: self.params.n(),
            regime: self.params.regime(),
            upper_thm1: self.upper_thm1.as_ref().map(|r| r.value),
            upper_thm4: self.upper_thm4.value,
            lower_thm2: self.lower_thm2.as_ref().map(|r| r.value),
            lower_thm3: self.lower_thm3.as_ref().map(|r| r.value),
            lower_main_a: self.lower_main_a.as_ref().map(|r| r.value),
        }
    }

    /// Key-value records of all present bounds, blank-line separated.
    pub fn records(&self) -> String {
        let mut parts = Vec::new();
        if let Some(r) = &self.upper_thm1 {
            parts.push(r.to_record());
        }
        parts.push(self.upper_thm4.to_record());
        for r in [&self.lower_thm2, &self.lower_thm3, &self.lower_main_a]
            .into_iter()
            .flatten()
        {
            parts.push(r.to_record());
        }
        parts.join("\n")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub u: f64,
    pub n: u64,
    pub regime: Regime,
    pub upper_thm1: Option<f64>,
    pub upper_thm4: f64,
    pub lower_thm2: Option<f64>,
    pub lower_thm3: Option<f64>,
    pub lower_main_a: Option<f64>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            num(self.alpha),
            num(self.u),
            self.n,
            self.regime.as_str(),
            opt_num(self.upper_thm1),
            num(self.upper_thm4),
            opt_num(self.lower_thm2),
            opt_num(self.lower_thm3),
            opt_num(self.lower_main_a)
        )
    }

    /// Upper bounds on `E_N` against lower bounds on `E_N`, and the
    /// product-state upper bound against the product-state lower bound.
    pub fn violations(&self) -> Vec<String> {
        let uppers = [
            ("upper_thm1", self.upper_thm1),
            ("upper_thm4", Some(self.upper_thm4)),
        ];
        let lowers = [
            ("lower_thm2", self.lower_thm2),
            ("lower_thm3", self.lower_thm3),
        ];
        let mut out = Vec::new();
        for (un, u) in uppers {
            for (ln, l) in lowers {
                if let (Some(u), Some(l)) = (u, l) {
                    if !(u >= l) {
                        out.push(format!("{un} = {u} < {ln} = {l}"));
                    }
                }
            }
        }
        if let (Some(u), Some(l)) = (self.upper_thm1, self.lower_main_a) {
            if !(u >= l) {
                out.push(format!("upper_thm1 = {u} < lower_mainA = {l}"));
            }
        }
        out
    }

    pub fn label(&self) -> String {
        format!(
            "alpha = {}, U = {}, N = {}",
            num(self.alpha),
            num(self.u),
            self.n
        )
    }
}

/// Shooting minimizer on the configured grid.
pub fn shooting_solution(config: &RunConfig) -> Result<PtfSolution, CliError> {
    let profile = solve_lane_emden(config.lane_emden_tolerance)?;
    Ok(minimizer_on_grid(&profile, config.grid()?)?)
}

/// Evaluates the bounds; the Thomas-Fermi part is prepared once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    upper: Option<ThomasFermiUpper>,
    c_g: f64,
    c_l: f64,
    lambda: f64,
}

impl Evaluator {
    /// `with_upper` solves the PTF problem, which only the attractive regime
    /// needs.
    pub fn new(config: &RunConfig, with_upper: bool) -> Result<Self, CliError> {
        let upper = if with_upper {
            Some(ThomasFermiUpper::new(
                &shooting_solution(config)?,
                config.mu,
            )?)
        } else {
            None
        };
        Ok(Self {
            upper,
            c_g: config.c_g,
            c_l: config.c_l,
            lambda: config.lambda,
        })
    }

    pub fn from_parts(upper: Option<ThomasFermiUpper>, c_g: f64, c_l: f64) -> Self {
        Self {
            upper,
            c_g,
            c_l,
            lambda: f64::INFINITY,
        }
    }

    pub fn params(&self, alpha: f64, u: f64, n: u64) -> Result<CouplingParams, CliError> {
        CouplingParams::with_cutoff(alpha, u, n, self.lambda)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn evaluate(&self, p: &CouplingParams) -> Result<BoundSet, CliError> {
        let regime = p.regime();
        let attractive = regime != Regime::Physical;
        let upper_thm1 = match (&self.upper, attractive) {
            (Some(upper), true) => Some(upper.bound(p, SmearingWidth::Optimal)?),
            (None, true) => {
                return Err(CliError::Failure(
                    "Thomas-Fermi bound requested without a PTF solution".into(),
                ))
            }
            _ => None,
        };
        let lower_thm2 = if attractive {
            Some(collapse_lower_bound(p, self.c_g)?)
        } else {
            None
        };
        let lower_thm3 = if regime == Regime::Physical {
            Some(repulsive_lower_bound(p)?)
        } else {
            None
        };
        let lower_main_a = if regime != Regime::Unphysical && p.u() > 0.0 {
            Some(product_state_lower_bound(p, self.c_l)?)
        } else {
            None
        };
        Ok(BoundSet {
            params: *p,
            upper_thm1,
            upper_thm4: linear_upper_bound(p),
            lower_thm2,
            lower_thm3,
            lower_main_a,
        })
    }
}

/// Least-squares slope of `ln |v|` against `ln N` over `window`. Undefined
/// with fewer than two points or when any value in the window is zero.
pub fn fit_slope(points: &[(u64, f64)], window: (u64, u64)) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, _)| *n >= window.0 && *n <= window.1)
        .map(|&(n, v)| ((n as f64).ln(), v.abs()))
        .collect();
    if pts.len() < 2 || pts.iter().any(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y.ln() - my), b + (x - mx) * (x - mx))
    });
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Fitted slope of one bound column for one `(alpha, U)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub alpha: f64,
    pub u: f64,
    pub bound: &'static str,
    pub slope: Option<f64>,
}

pub const BOUND_COLUMNS: [&str; 5] = [
    "upper_thm1",
    "upper_thm4",
    "lower_thm2",
    "lower_thm3",
    "lower_mainA",
];

fn column(row: &SweepRow, name: &str) -> Option<f64> {
    match name {
        "upper_thm1" => row.upper_thm1,
        "upper_thm4" => Some(row.upper_thm4),
        "lower_thm2" => row.lower_thm2,
        "lower_thm3" => row.lower_thm3,
        "lower_mainA" => row.lower_main_a,
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub slopes: Vec<SlopeFit>,
    pub phase: HeatMap,
}

impl SweepResult {
    pub fn csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.to_csv());
            s.push('\n');
        }
        s
    }

    pub fn slopes_csv(&self) -> String {
        let mut s = String::from("alpha,U,bound,slope\n");
        for f in &self.slopes {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                num(f.alpha),
                num(f.u),
                f.bound,
                opt_num(f.slope)
            );
        }
        s
    }

    pub fn slope(&self, alpha: f64, u: f64, bound: &str) -> Option<f64> {
        self.slopes
            .iter()
            .find(|f| f.alpha == alpha && f.u == u && f.bound == bound)
            .and_then(|f| f.slope)
    }
}

/// Evaluates the whole sweep in row order: `alpha`, then `U`, then `N`.
pub fn run_sweep(config: &RunConfig, evaluator: &Evaluator) -> Result<SweepResult, CliError> {
    let ns = config.sweep_ns()?;
    if config.sweep_alpha.is_empty() || config.sweep_u.is_empty() {
        return Err(CliError::Usage(
            "sweep_alpha and sweep_u must not be empty".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &alpha in &config.sweep_alpha {
        for &u in &config.sweep_u {
            let start = rows.len();
            for &n in &ns {
                let row = evaluator.evaluate(&evaluator.params(alpha, u, n)?)?.row();
                let bad = row.violations();
                if !bad.is_empty() {
                    return Err(CliError::Failure(format!(
                        "sweep aborted at row {} ({}): {}",
                        rows.len() + 1,
                        row.label(),
                        bad.join("; ")
                    )));
                }
                rows.push(row);
            }
            for bound in BOUND_COLUMNS {
                let pts: Vec<(u64, f64)> = rows[start..]
                    .iter()
                    .filter_map(|r| column(r, bound).map(|v| (r.n, v)))
                    .collect();
                if pts.is_empty() {
                    continue;
                }
                let slope = fit_slope(&pts, (config.fit_n_min, config.fit_n_max));
                slopes.push(SlopeFit {
                    alpha,
                    u,
                    bound,
                    slope,
                });
            }
        }
    }
    let phase = phase_diagram(config, evaluator)?;
    Ok(SweepResult {
        rows,
        slopes,
        phase,
    })
}

/// `log10 |lower bound|` at `phase_n` over cell centres in `(alpha, U)`:
/// the collapse bound where `sqrt2 alpha >= U`, the repulsive one elsewhere.
fn phase_diagram(config: &RunConfig, evaluator: &Evaluator) -> Result<HeatMap, CliError> {
    let m = config.phase_cells;
    let centre = |max: f64, i: usize| max * (i as f64 + 0.5) / m as f64;
    let mut values = vec![vec![0.0; m]; m];
    for (j, row) in values.iter_mut().enumerate() {
        for (i, cell) in row.iter_mut().enumerate() {
            let p = evaluator.params(
                centre(config.phase_alpha_max, i),
                centre(config.phase_u_max, j),
                config.phase_n,
            )?;
            let v = if p.regime() == Regime::Physical {
                repulsive_lower_bound(&p)?.value
            } else {
                collapse_lower_bound(&p, config.c_g)?.value
            };
            *cell = v.abs().log10();
        }
    }
    Ok(HeatMap {
        title: format!("log10 |lower bound| at N = {}", config.phase_n),
        x_label: "alpha".into(),
        y_label: "U".into(),
        x_max: config.phase_alpha_max,
        y_max: config.phase_u_max,
        values,
    })
}

pub fn command<E: std::io::Write>(config: &RunConfig, stderr: &mut E) -> Result<Outcome, CliError> {
    config.sweep_ns()?;
    let attractive = config.sweep_alpha.iter().any(|&a| {
        config
            .sweep_u
            .iter()
            .any(|&u| std::f64::consts::SQRT_2 * a >= u)
    });
    if config.c_g_is_default {
        let _ = writeln!(stderr, "{C_G_WARNING}");
    }
    let evaluator = Evaluator::new(config, attractive)?;
    let result = run_sweep(config, &evaluator)?;

    let dir = &config.out;
    let mut written = vec![
        write_file(dir, "sweep.csv", &result.csv())?,
        write_file(dir, "slopes.csv", &result.slopes_csv())?,
    ];
    let mut index = 0;
    for &alpha in &config.sweep_alpha {
        for &u in &config.sweep_u {
            index += 1;
            let series: Vec<Series> = BOUND_COLUMNS
                .iter()
                .filter_map(|&bound| {
                    let points: Vec<(f64, f64)> = result
                        .rows
                        .iter()
                        .filter(|r| r.alpha == alpha && r.u == u)
                        .filter_map(|r| column(r, bound).map(|v| (r.n as f64, v.abs())))
                        .collect();
                    if points.is_empty() {
                        return None;
                    }
                    Some(Series {
                        label: bound.to_string(),
                        points,
                        slope: result.slope(alpha, u, bound),
                    })
                })
                .collect();
            let title = format!("|bound| vs N, alpha = {}, U = {}", num(alpha), num(u));
            written.push(write_file(
                dir,
                &format!("loglog_{index:02}.svg"),
                &loglog(&title, &series),
            )?);
        }
    }
    written.push(write_file(dir, "phase.svg", &heatmap(&result.phase))?);

    let rows: Vec<Vec<String>> = result
        .slopes
        .iter()
        .map(|f| {
            vec![
                num(f.alpha),
                num(f.u),
                f.bound.to_string(),
                f.slope
                    .map(|s| format!("{s:.6}"))
                    .unwrap_or_else(|| "undefined".into()),
            ]
        })
        .collect();
    let mut text = format!("{} rows, all upper >= lower\n\n", result.rows.len());
    text.push_str(&table(&["alpha", "U", "bound", "slope"], &rows));
    text.push('\n');
    for path in written {
        let _ = writeln!(text, "wrote {}", path.display());
    }
    Ok(text.into())
}
