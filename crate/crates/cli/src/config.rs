//! Run configuration: a flat `key = value` file with a full default set.
//! Command line flags override file values; unknown keys are errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use polaron_core::numerics::{GridKind, RadialGrid};

use crate::CliError;

/// Faults the verification suite can be asked to plant in itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Normalizes `e_Lambda` by `1/c_0` instead of `1/c_0^2`.
    ElambdaPrefactor,
}

impl Fault {
    pub fn as_str(self) -> &'static str {
        match self {
            Fault::None => "none",
            Fault::ElambdaPrefactor => "elambda-prefactor",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Fault::None),
            "elambda-prefactor" => Some(Fault::ElambdaPrefactor),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid_kind: GridKind,
    pub grid_nodes: usize,
    pub grid_r_min: f64,
    pub grid_r_max: f64,
    pub grid_tolerance: f64,
    pub lane_emden_tolerance: f64,
    pub gradient_max_iters: usize,
    pub gradient_step: f64,
    /// Relative agreement required of the two PTF solvers.
    pub ptf_agreement: f64,
    pub virial_tolerance: f64,
    pub c_g: f64,
    pub c_l: f64,
    pub mu: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub u: f64,
    pub n: u64,
    pub sweep_alpha: Vec<f64>,
    pub sweep_u: Vec<f64>,
    pub sweep_n_min: u64,
    pub sweep_n_max: u64,
    pub sweep_n_points: usize,
    /// Fitting window for the log-log slopes.
    pub fit_n_min: u64,
    pub fit_n_max: u64,
    pub phase_n: u64,
    pub phase_alpha_max: f64,
    pub phase_u_max: f64,
    pub phase_cells: usize,
    pub out: PathBuf,
    pub seed: u64,
    pub inject_fault: Fault,
    /// Set when `c_g` came from the defaults rather than the user.
    pub c_g_is_default: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_kind: GridKind::Logarithmic,
            grid_nodes: 2000,
            grid_r_min: 1e-4,
            grid_r_max: 50.0,
            grid_tolerance: 1e-6,
            lane_emden_tolerance: 1e-12,
            gradient_max_iters: polaron_core::ptf::DEFAULT_MAX_ITERS,
            gradient_step: 1e-2,
            ptf_agreement: 1e-4,
            virial_tolerance: 1e-5,
            c_g: 1.0,
            c_l: polaron_core::numerics::special::C_L_DEFAULT,
            mu: 37.0 / 31.0,
            lambda: f64::INFINITY,
            alpha: 1.0,
            u: 2.0,
            n: 1,
            sweep_alpha: vec![0.5, 1.0, 2.0],
            sweep_u: vec![0.5, 2.0],
            sweep_n_min: 100,
            sweep_n_max: 1_000_000,
            sweep_n_points: 17,
            fit_n_min: 100,
            fit_n_max: 1_000_000,
            phase_n: 1000,
            phase_alpha_max: 3.0,
            phase_u_max: 4.0,
            phase_cells: 24,
            out: PathBuf::from("results"),
            seed: 20_240_601,
            inject_fault: Fault::None,
            c_g_is_default: true,
        }
    }
}

/// Every key a config file may contain.
pub const KEYS: &[&str] = &[
    "grid_kind",
    "grid_nodes",
    "grid_r_min",
    "grid_r_max",
    "grid_tolerance",
    "lane_emden_tolerance",
    "gradient_max_iters",
    "gradient_step",
    "ptf_agreement",
    "virial_tolerance",
    "c_g",
    "c_l",
    "mu",
    "lambda",
    "alpha",
    "U",
    "N",
    "sweep_alpha",
    "sweep_u",
    "sweep_n_min",
    "sweep_n_max",
    "sweep_n_points",
    "fit_n_min",
    "fit_n_max",
    "phase_n",
    "phase_alpha_max",
    "phase_u_max",
    "phase_cells",
    "out",
    "seed",
    "inject_fault",
];

fn bad(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Usage(format!(
        "config key '{key}': cannot read '{value}' as {expected}"
    ))
}

/// Floats, `inf`, or a fraction `p/q`.
fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    if let Some((p, q)) = value.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad(key, value, "a number"))?;
        let q: f64 = q.trim().parse().map_err(|_| bad(key, value, "a number"))?;
        return Ok(p / q);
    }
    value.parse().map_err(|_| bad(key, value, "a number"))
}

fn parse_int<T: std::str::FromStr + TryFrom<u64>>(key: &str, value: &str) -> Result<T, CliError> {
    // 1e6 style integers are accepted when exact
    if let Ok(v) = value.parse::<T>() {
        return Ok(v);
    }
    let x: f64 = value.parse().map_err(|_| bad(key, value, "an integer"))?;
    if x.fract() == 0.0 && (0.0..9.0e15).contains(&x) {
        if let Ok(v) = T::try_from(x as u64) {
            return Ok(v);
        }
    }
    Err(bad(key, value, "an integer"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect()
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "grid_kind" => {
                self.grid_kind = value
                    .parse()
                    .map_err(|_| bad(key, value, "uniform or logarithmic"))?
            }
            "grid_nodes" => self.grid_nodes = parse_int(key, value)?,
            "grid_r_min" => self.grid_r_min = parse_f64(key, value)?,
            "grid_r_max" => self.grid_r_max = parse_f64(key, value)?,
            "grid_tolerance" => self.grid_tolerance = parse_f64(key, value)?,
            "lane_emden_tolerance" => self.lane_emden_tolerance = parse_f64(key, value)?,
            "gradient_max_iters" => self.gradient_max_iters = parse_int(key, value)?,
            "gradient_step" => self.gradient_step = parse_f64(key, value)?,
            "ptf_agreement" => self.ptf_agreement = parse_f64(key, value)?,
            "virial_tolerance" => self.virial_tolerance = parse_f64(key, value)?,
            "c_g" => {
                self.c_g = parse_f64(key, value)?;
                self.c_g_is_default = false;
            }
            "c_l" => self.c_l = parse_f64(key, value)?,
            "mu" => self.mu = parse_f64(key, value)?,
            "lambda" => self.lambda = parse_f64(key, value)?,
            "alpha" => self.alpha = parse_f64(key, value)?,
            "U" => self.u = parse_f64(key, value)?,
            "N" => self.n = parse_int(key, value)?,
            "sweep_alpha" => self.sweep_alpha = parse_list(key, value)?,
            "sweep_u" => self.sweep_u = parse_list(key, value)?,
            "sweep_n_min" => self.sweep_n_min = parse_int(key, value)?,
            "sweep_n_max" => self.sweep_n_max = parse_int(key, value)?,
            "sweep_n_points" => self.sweep_n_points = parse_int(key, value)?,
            "fit_n_min" => self.fit_n_min = parse_int(key, value)?,
            "fit_n_max" => self.fit_n_max = parse_int(key, value)?,
            "phase_n" => self.phase_n = parse_int(key, value)?,
            "phase_alpha_max" => self.phase_alpha_max = parse_f64(key, value)?,
            "phase_u_max" => self.phase_u_max = parse_f64(key, value)?,
            "phase_cells" => self.phase_cells = parse_int(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = parse_int(key, value)?,
            "inject_fault" => {
                self.inject_fault = Fault::parse(value)
                    .ok_or_else(|| bad(key, value, "none or elambda-prefactor"))?
            }
            other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a config file on top of the current values.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{origin}:{}: expected 'key = value', got '{line}'",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value).map_err(|e| match e {
                CliError::Usage(msg) => CliError::Usage(format!("{origin}:{}: {msg}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = Self::default();
        config.apply_text(&text, &path.display().to_string())?;
        Ok(config)
    }

    /// Checks everything that does not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("grid_tolerance", self.grid_tolerance),
            ("lane_emden_tolerance", self.lane_emden_tolerance),
            ("gradient_step", self.gradient_step),
            ("ptf_agreement", self.ptf_agreement),
            ("virial_tolerance", self.virial_tolerance),
            ("c_l", self.c_l),
            ("lambda", self.lambda),
            ("grid_r_min", self.grid_r_min),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(CliError::Usage(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.c_g >= 0.0 && self.c_g.is_finite()) {
            return Err(CliError::Usage(format!(
                "c_g must be finite and >= 0, got {}",
                self.c_g
            )));
        }
        if !(self.mu > 1.0 && self.mu < 1.2) {
            return Err(CliError::Usage(format!(
                "mu must lie in (1, 6/5), got {}",
                self.mu
            )));
        }
        if !(self.grid_r_max > self.grid_r_min) {
            return Err(CliError::Usage("grid_r_max must exceed grid_r_min".into()));
        }
        if !(self.phase_alpha_max > 0.0 && self.phase_u_max > 0.0) || self.phase_cells < 2 {
            return Err(CliError::Usage(
                "phase diagram needs positive ranges and at least 2 cells".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<RadialGrid>, CliError> {
        RadialGrid::new(
            self.grid_kind,
            self.grid_nodes,
            self.grid_r_min,
            self.grid_r_max,
            self.grid_tolerance,
        )
        .map(Arc::new)
        .map_err(|e| CliError::Usage(format!("grid: {e}")))
    }

    /// Log-spaced integer particle numbers of the sweep, deduplicated.
    pub fn sweep_ns(&self) -> Result<Vec<u64>, CliError> {
        let (lo, hi, count) = (self.sweep_n_min, self.sweep_n_max, self.sweep_n_points);
        if lo == 0 || lo > hi || count == 0 {
            return Err(CliError::Usage(format!(
                "empty N-range: sweep_n_min = {lo}, sweep_n_max = {hi}, sweep_n_points = {count}"
            )));
        }
        if count == 1 || lo == hi {
            return Ok(vec![lo]);
        }
        let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
        let mut ns: Vec<u64> = (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as u64)
            .map(|n| n.clamp(lo, hi))
            .collect();
        ns.dedup();
        Ok(ns)
    }

    /// The full configuration in file form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("grid_kind", self.grid_kind.as_str().into());
        kv("grid_nodes", self.grid_nodes.to_string());
        kv("grid_r_min", self.grid_r_min.to_string());
        kv("grid_r_max", self.grid_r_max.to_string());
        kv("grid_tolerance", self.grid_tolerance.to_string());
        kv(
            "lane_emden_tolerance",
            self.lane_emden_tolerance.to_string(),
        );
        kv("gradient_max_iters", self.gradient_max_iters.to_string());
        kv("gradient_step", self.gradient_step.to_string());
        kv("ptf_agreement", self.ptf_agreement.to_string());
        kv("virial_tolerance", self.virial_tolerance.to_string());
        kv("c_g", self.c_g.to_string());
        kv("c_l", self.c_l.to_string());
        kv("mu", self.mu.to_string());
        kv("lambda", self.lambda.to_string());
        kv("alpha", self.alpha.to_string());
        kv("U", self.u.to_string());
        kv("N", self.n.to_string());
        kv("sweep_alpha", fmt_list(&self.sweep_alpha));
        kv("sweep_u", fmt_list(&self.sweep_u));
        kv("sweep_n_min", self.sweep_n_min.to_string());
        kv("sweep_n_max", self.sweep_n_max.to_string());
        kv("sweep_n_points", self.sweep_n_points.to_string());
        kv("fit_n_min", self.fit_n_min.to_string());
        kv("fit_n_max", self.fit_n_max.to_string());
        kv("phase_n", self.phase_n.to_string());
        kv("phase_alpha_max", self.phase_alpha_max.to_string());
        kv("phase_u_max", self.phase_u_max.to_string());
        kv("phase_cells", self.phase_cells.to_string());
        kv("out", self.out.display().to_string());
        kv("seed", self.seed.to_string());
        kv("inject_fault", self.inject_fault.as_str().into());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_survive_their_own_text_form() {
        let d = RunConfig::default();
        let mut back = RunConfig::default();
        back.apply_text(&d.to_text(), "defaults").unwrap();
        back.c_g_is_default = true;
        assert_eq!(back, d);
        let text = d.to_text();
        let keys: Vec<&str> = text
            .lines()
            .map(|l| l.split(" = ").next().unwrap())
            .collect();
        assert_eq!(keys, KEYS);
    }

    #[test]
    fn unknown_and_malformed_keys_are_errors() {
        let mut c = RunConfig::default();
        assert!(matches!(
            c.apply_text("colour = red", "t"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            c.apply_text("alpha 2", "t"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            c.apply_text("N = -3", "t"),
            Err(CliError::Usage(_))
        ));
        c.apply_text(
            "# comment\nalpha = 2 # trailing\nmu = 37/31\nN = 1e6\n",
            "t",
        )
        .unwrap();
        assert_eq!((c.alpha, c.mu, c.n), (2.0, 37.0 / 31.0, 1_000_000));
    }

    #[test]
    fn sweep_range() {
        let mut c = RunConfig::default();
        let ns = c.sweep_ns().unwrap();
        assert_eq!(ns.first(), Some(&100));
        assert_eq!(ns.last(), Some(&1_000_000));
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        c.sweep_n_min = 10;
        c.sweep_n_max = 5;
        assert!(c.sweep_ns().is_err());
    }
}
