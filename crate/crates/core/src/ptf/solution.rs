use std::fmt::Write as _;
use std::sync::Arc;

use crate::numerics::{GridKind, RadialDensity, RadialGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Shooting,
    Gradient,
}

impl SolverMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMethod::Shooting => "shooting",
            SolverMethod::Gradient => "gradient",
        }
    }
}

impl std::str::FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shooting" => Ok(SolverMethod::Shooting),
            "gradient" => Ok(SolverMethod::Gradient),
            other => Err(Error::Record(format!("unknown method '{other}'"))),
        }
    }
}

/// A (candidate) minimizer of the functional with its energy split.
#[derive(Debug, Clone, PartialEq)]
pub struct PtfSolution {
    pub density: RadialDensity,
    pub energy: f64,
    pub kinetic_part: f64,
    pub coulomb_part: f64,
    pub chemical_potential: f64,
    pub virial_defect: f64,
    pub method: SolverMethod,
    pub iterations: usize,
}

impl PtfSolution {
    pub(crate) fn assemble(
        density: RadialDensity,
        kinetic_part: f64,
        coulomb_part: f64,
        chemical_potential: f64,
        method: SolverMethod,
        iterations: usize,
    ) -> Self {
        let energy = kinetic_part - coulomb_part;
        Self {
            density,
            energy,
            kinetic_part,
            coulomb_part,
            chemical_potential,
            virial_defect: (energy + kinetic_part).abs() / energy.abs(),
            method,
            iterations,
        }
    }

    /// Radius of the support: the last node with a nonzero value.
    pub fn support_radius(&self) -> f64 {
        let v = self.density.values();
        let nodes = self.density.grid().nodes();
        v.iter().rposition(|x| *x > 0.0).map_or(0.0, |i| nodes[i])
    }

    /// Text record: a `key = value` header, a `[density]` marker and one
    /// `r rho` pair per grid node. Floats are written in shortest round-trip
    /// form; reading a record back reproduces every value exactly and the
    /// grid up to roundoff in its regenerated nodes.
    pub fn to_record(&self) -> String {
        let g = self.density.grid();
        let mut out = String::new();
        let _ = writeln!(out, "# polaron thomas-fermi solution");
        let _ = writeln!(out, "format = {RECORD_FORMAT}");
        let _ = writeln!(out, "method = {}", self.method.as_str());
        let _ = writeln!(out, "energy = {:e}", self.energy);
        let _ = writeln!(out, "kinetic_part = {:e}", self.kinetic_part);
        let _ = writeln!(out, "coulomb_part = {:e}", self.coulomb_part);
        let _ = writeln!(out, "chemical_potential = {:e}", self.chemical_potential);
        let _ = writeln!(out, "virial_defect = {:e}", self.virial_defect);
        let _ = writeln!(out, "iterations = {}", self.iterations);
        let _ = writeln!(out, "mass = {:e}", self.density.mass());
        let _ = writeln!(out, "grid_kind = {}", g.kind().as_str());
        let _ = writeln!(out, "grid_nodes = {}", g.len());
        let _ = writeln!(out, "grid_r_min = {:e}", g.nodes()[0]);
        let _ = writeln!(out, "grid_r_max = {:e}", g.r_max());
        let _ = writeln!(out, "grid_tolerance = {:e}", g.tolerance());
        let _ = writeln!(out, "[density]");
        for (r, v) in g.nodes().iter().zip(self.density.values()) {
            let _ = writeln!(out, "{r:e} {v:e}");
        }
        out
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut header = std::collections::BTreeMap::new();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[density]" {
                break;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Record(format!("expected 'key = value', got '{line}'")))?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |key: &str| -> Result<&str> {
            header
                .get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Record(format!("missing key '{key}'")))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse::<f64>()
                .map_err(|e| Error::Record(format!("bad value for '{key}': {e}")))
        };
        let format: u32 = get("format")?
            .parse()
            .map_err(|e| Error::Record(format!("bad format version: {e}")))?;
        if format != RECORD_FORMAT {
            return Err(Error::Record(format!(
                "unsupported format version {format}"
            )));
        }
        let kind: GridKind = get("grid_kind")?.parse()?;
        let count: usize = get("grid_nodes")?
            .parse()
            .map_err(|e| Error::Record(format!("bad grid_nodes: {e}")))?;
        let grid = RadialGrid::new(
            kind,
            count,
            num("grid_r_min")?,
            num("grid_r_max")?,
            num("grid_tolerance")?,
        )?;
        let mut values = Vec::with_capacity(count);
        for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            let mut parts = line.split_whitespace();
            let (Some(r), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Record(format!("expected 'r rho', got '{line}'")));
            };
            let r: f64 = r
                .parse()
                .map_err(|e| Error::Record(format!("bad radius: {e}")))?;
            let v: f64 = v
                .parse()
                .map_err(|e| Error::Record(format!("bad density: {e}")))?;
            if i >= count || (r - grid.nodes()[i]).abs() > 1e-12 * r {
                return Err(Error::Record(format!(
                    "density row {i} does not match the grid"
                )));
            }
            values.push(v);
        }
        let density = RadialDensity::new(Arc::new(grid), values)?;
        Ok(Self {
            density,
            energy: num("energy")?,
            kinetic_part: num("kinetic_part")?,
            coulomb_part: num("coulomb_part")?,
            chemical_potential: num("chemical_potential")?,
            virial_defect: num("virial_defect")?,
            method: get("method")?.parse()?,
            iterations: get("iterations")?
                .parse()
                .map_err(|e| Error::Record(format!("bad iterations: {e}")))?,
        })
    }
}

pub const RECORD_FORMAT: u32 = 1;
