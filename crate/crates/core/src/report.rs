//! Bound reports: a value, the named terms it was assembled from, and the
//! flat text and CSV forms used by the command line tool.

use std::fmt::Write as _;

use crate::lower::CutoffPlan;
use crate::CouplingParams;

/// Which bound a report carries. The tags double as CSV column names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// `E_N <= beta^2 [N^{7/3} E_PTF + error terms]`.
    ThomasFermiUpper,
    /// The phase-space trial state evaluated directly.
    HartreeFockUpper,
    /// `E_N <= -alpha N`.
    LinearUpper,
    /// `E_N >= -C_G beta^2 N^{7/3} - C alpha^2 N^{20/9}`.
    CollapseLower,
    /// `E_N >= -(16 alpha^2 N^2 / 3 pi + 3) U / (U - sqrt2 alpha)`.
    RepulsiveLower,
    /// Product states `f x eta` in the regime `sqrt2 alpha <= U`.
    ProductStateLower,
}

impl BoundKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::ThomasFermiUpper => "upper_thm1",
            BoundKind::HartreeFockUpper => "upper_hf",
            BoundKind::LinearUpper => "upper_thm4",
            BoundKind::CollapseLower => "lower_thm2",
            BoundKind::RepulsiveLower => "lower_thm3",
            BoundKind::ProductStateLower => "lower_mainA",
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(
            self,
            BoundKind::ThomasFermiUpper | BoundKind::HartreeFockUpper | BoundKind::LinearUpper
        )
    }
}

/// Ordered named contributions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Terms(Vec<(&'static str, f64)>);

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &'static str, value: f64) -> &mut Self {
        if let Some(slot) = self.0.iter_mut().find(|(n, _)| *n == name) {
            slot.1 = value;
        } else {
            self.0.push((name, value));
        }
        self
    }

    /// Value of a term.
    ///
    /// # Panics
    /// If the term is absent; assembly formulas only ask for terms they put
    /// there themselves.
    pub fn get(&self, name: &str) -> f64 {
        self.try_get(name)
            .unwrap_or_else(|| panic!("missing term '{name}'"))
    }

    pub fn try_get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundReport {
    pub kind: BoundKind,
    pub params: CouplingParams,
    pub value: f64,
    pub terms: Terms,
    /// The assembly formula, in words.
    pub formula: &'static str,
}

impl UpperBoundReport {
    /// Recomputes the value from the terms alone.
    pub fn reassemble(&self) -> f64 {
        crate::upper::assemble(self.kind, &self.terms)
    }

    pub fn to_record(&self) -> String {
        let mut out = header(self.kind, &self.params, self.value, self.formula);
        write_terms(&mut out, &self.terms);
        out
    }

    pub fn to_csv_row(&self) -> String {
        csv_row(self.kind, &self.params, self.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub kind: BoundKind,
    pub params: CouplingParams,
    pub plan: Option<CutoffPlan>,
    pub value: f64,
    pub terms: Terms,
    /// Collapse constant, for the bounds that use it.
    pub c_g: Option<f64>,
    /// Lieb-Oxford constant, for the bounds that use it.
    pub c_l: Option<f64>,
    pub formula: &'static str,
}

impl LowerBoundReport {
    pub fn reassemble(&self) -> f64 {
        crate::lower::assemble(self.kind, &self.terms)
    }

    pub fn to_record(&self) -> String {
        let mut out = header(self.kind, &self.params, self.value, self.formula);
        if let Some(c) = self.c_g {
            let _ = writeln!(out, "C_G = {c:e}");
        }
        if let Some(c) = self.c_l {
            let _ = writeln!(out, "c_L = {c:e}");
        }
        if let Some(plan) = &self.plan {
            let _ = writeln!(out, "plan.K = {:e}", plan.k);
            let _ = writeln!(out, "plan.delta = {:e}", plan.delta);
            let _ = writeln!(out, "plan.kappa = {:e}", plan.kappa);
            let _ = writeln!(out, "plan.error_const = {:e}", plan.error_const);
        }
        write_terms(&mut out, &self.terms);
        out
    }

    pub fn to_csv_row(&self) -> String {
        csv_row(self.kind, &self.params, self.value)
    }
}

pub const REPORT_CSV_HEADER: &str = "bound,alpha,U,N,Lambda,value";

fn header(kind: BoundKind, p: &CouplingParams, value: f64, formula: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[{}]", kind.tag());
    let _ = writeln!(out, "alpha = {:e}", p.alpha());
    let _ = writeln!(out, "U = {:e}", p.u());
    let _ = writeln!(out, "N = {}", p.n());
    let _ = writeln!(out, "Lambda = {}", fmt_cutoff(p.lambda()));
    let _ = writeln!(out, "beta = {:e}", p.beta());
    let _ = writeln!(out, "value = {value:e}");
    let _ = writeln!(out, "formula = {formula}");
    out
}

fn write_terms(out: &mut String, terms: &Terms) {
    for (name, v) in terms.iter() {
        let _ = writeln!(out, "term.{name} = {v:e}");
    }
}

fn csv_row(kind: BoundKind, p: &CouplingParams, value: f64) -> String {
    format!(
        "{},{:e},{:e},{},{},{:e}",
        kind.tag(),
        p.alpha(),
        p.u(),
        p.n(),
        fmt_cutoff(p.lambda()),
        value
    )
}

fn fmt_cutoff(lambda: f64) -> String {
    if lambda.is_infinite() {
        "inf".to_string()
    } else {
        format!("{lambda:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_keep_order_and_overwrite() {
        let mut t = Terms::new();
        t.push("b", 1.0).push("a", 2.0).push("b", 3.0);
        let names: Vec<_> = t.iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["b", "a"]);
        assert_eq!(t.get("b"), 3.0);
        assert_eq!(t.try_get("c"), None);
    }

    #[test]
    fn tags_are_distinct() {
        let all = [
            BoundKind::ThomasFermiUpper,
            BoundKind::HartreeFockUpper,
            BoundKind::LinearUpper,
            BoundKind::CollapseLower,
            BoundKind::RepulsiveLower,
            BoundKind::ProductStateLower,
        ];
        let tags: std::collections::BTreeSet<_> = all.iter().map(|k| k.tag()).collect();
        assert_eq!(tags.len(), all.len());
        assert_eq!(all.iter().filter(|k| k.is_upper()).count(), 3);
    }
}
