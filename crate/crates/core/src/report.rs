//! Structured verification reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graded::GradedSubspace;
use crate::rational::{fmt_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), status: Status::from_bool(ok), witness: None }
    }

    pub fn with_witness(name: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::from_bool(ok), witness: Some(witness.into()) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One row of a dimension table; weight and charge are rationals in text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub weight: String,
    pub charge: String,
    pub dim: usize,
}

impl DimEntry {
    pub fn new(table: Option<&str>, weight: &Rational, charge: &Rational, dim: usize) -> Self {
        Self { table: table.map(str::to_string), weight: fmt_rational(weight), charge: fmt_rational(charge), dim }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub dims: Vec<DimEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl GradedReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), ..Self::default() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.push(Check::new(name, ok));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Appends every block of `space` to the dimension table.
    pub fn add_dims(&mut self, table: Option<&str>, space: &GradedSubspace) {
        for ((w, c), d) in space.dims() {
            self.dims.push(DimEntry::new(table, &w, &c, d));
        }
    }

    /// Appends another report's checks, dims and notes.
    pub fn absorb(&mut self, other: GradedReport) {
        self.checks.extend(other.checks);
        self.dims.extend(other.dims);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for GradedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(f, "  {tag} {}  [{w}]", c.name)?,
                None => writeln!(f, "  {tag} {}", c.name)?,
            }
        }
        if !self.dims.is_empty() {
            let tw = self.dims.iter().map(|d| d.table.as_deref().map_or(1, str::len)).max().unwrap_or(0).max(5);
            let ww = self.dims.iter().map(|d| d.weight.len()).max().unwrap_or(0).max(6);
            let cw = self.dims.iter().map(|d| d.charge.len()).max().unwrap_or(0).max(6);
            writeln!(f, "  {:<tw$}  {:>ww$}  {:>cw$}  dim", "table", "weight", "charge")?;
            for d in &self.dims {
                let table = d.table.as_deref().unwrap_or("-");
                writeln!(f, "  {table:<tw$}  {:>ww$}  {:>cw$}  {}", d.weight, d.charge, d.dim)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        if let Some(ms) = self.timing_ms {
            writeln!(f, "  time {ms} ms")?;
        }
        let total = self.checks.len();
        let failed = self.failures().count();
        write!(f, "{} of {} checks passed", total - failed, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = GradedReport::new("demo");
        r.push(Check::with_witness("x", true, "0"));
        r.check("y", false);
        r.dims.push(DimEntry::new(None, &Rational::from_integer(1.into()), &Rational::new(2.into(), 3.into()), 4));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][1]["status"], "fail");
        assert!(v["checks"][1].get("witness").is_none());
        assert_eq!(v["dims"][0]["charge"], "2/3");
        assert!(v.get("timing_ms").is_none());
        assert!(!r.passed());
        let back: GradedReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
