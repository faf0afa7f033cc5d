//! Verification rows, tolerance overrides and deterministic JSON/CSV output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: u32 = 1;

/// Where an oracle value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A number or law quoted in the source material.
    Published,
    /// Follows by inspection.
    Trivial,
    /// Produced by an independent oracle.
    Derived,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        }
    }
}

/// How `computed` is judged against `oracle` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|computed − oracle| ≤ tolerance`.
    Absolute,
    /// `|computed − oracle| ≤ tolerance·|oracle|`.
    Relative,
    /// `computed ≤ tolerance`.
    AtMost,
    /// `computed ≥ tolerance`.
    AtLeast,
    /// `computed == oracle`.
    Exact,
}

impl Comparison {
    pub fn as_str(&self) -> &'static str {
        match self {
            Comparison::Absolute => "absolute",
            Comparison::Relative => "relative",
            Comparison::AtMost => "at_most",
            Comparison::AtLeast => "at_least",
            Comparison::Exact => "exact",
        }
    }

    pub fn passes(&self, computed: f64, oracle: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Absolute => (computed - oracle).abs() <= tolerance,
            Comparison::Relative => (computed - oracle).abs() <= tolerance * oracle.abs(),
            Comparison::AtMost => computed <= tolerance,
            Comparison::AtLeast => computed >= tolerance,
            Comparison::Exact => computed == oracle,
        }
    }
}

/// Format with 17 significant digits.
pub fn format_sig17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn sig17<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        RawValue::from_string(format_sig17(*v)).map_err(S::Error::custom)?.serialize(s)
    } else {
        s.serialize_str(&v.to_string())
    }
}

fn sig17_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct W(#[serde(serialize_with = "sig17")] f64);
    s.collect_map(m.iter().map(|(k, v)| (k, W(*v))))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub problem: String,
    pub check: String,
    #[serde(serialize_with = "sig17")]
    pub computed: f64,
    #[serde(serialize_with = "sig17")]
    pub oracle: f64,
    #[serde(serialize_with = "sig17")]
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
    pub provenance: Provenance,
    pub anchor: String,
}

/// Tolerance overrides keyed by `problem.check` or bare `check`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    map: BTreeMap<String, f64>,
}

impl Overrides {
    pub fn new(map: BTreeMap<String, f64>) -> Self {
        Self { map }
    }

    pub fn lookup(&self, problem: &str, check: &str) -> Option<f64> {
        self.map
            .get(&format!("{problem}.{check}"))
            .or_else(|| self.map.get(check))
            .copied()
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.map
    }

    /// Keys that matched none of `rows`.
    pub fn unused(&self, rows: &[CheckRow]) -> Vec<String> {
        self.map
            .keys()
            .filter(|k| !rows.iter().any(|r| **k == r.check || **k == format!("{}.{}", r.problem, r.check)))
            .cloned()
            .collect()
    }
}

/// Collects rows for one problem, applying overrides as they are added.
pub struct Checker<'a> {
    problem: &'static str,
    overrides: &'a Overrides,
    rows: Vec<CheckRow>,
}

impl<'a> Checker<'a> {
    pub fn new(problem: &'static str, overrides: &'a Overrides) -> Self {
        Self {
            problem,
            overrides,
            rows: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn check(
        &mut self,
        check: impl Into<String>,
        computed: f64,
        oracle: f64,
        tolerance: f64,
        comparison: Comparison,
        provenance: Provenance,
        anchor: &str,
    ) {
        let check = check.into();
        let tolerance = self.overrides.lookup(self.problem, &check).unwrap_or(tolerance);
        self.rows.push(CheckRow {
            problem: self.problem.to_string(),
            passed: comparison.passes(computed, oracle, tolerance),
            check,
            computed,
            oracle,
            tolerance,
            comparison,
            provenance,
            anchor: anchor.to_string(),
        });
    }

    /// Record a computation that could not complete.
    pub fn error(&mut self, check: impl Into<String>, message: &str) {
        self.rows.push(CheckRow {
            problem: self.problem.to_string(),
            check: check.into(),
            computed: f64::NAN,
            oracle: f64::NAN,
            tolerance: f64::NAN,
            comparison: Comparison::Exact,
            passed: false,
            provenance: Provenance::Derived,
            anchor: format!("error: {message}"),
        });
    }

    pub fn into_rows(self) -> Vec<CheckRow> {
        self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub seed: u64,
    pub problems: Vec<String>,
    #[serde(serialize_with = "sig17_map")]
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub unused_overrides: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn new(seed: u64, problems: Vec<String>, overrides: &Overrides, rows: Vec<CheckRow>) -> Self {
        let passed = rows.iter().filter(|r| r.passed).count();
        Self {
            schema_version: SCHEMA_VERSION,
            seed,
            problems,
            tolerance_overrides: overrides.as_map().clone(),
            unused_overrides: overrides.unused(&rows),
            passed,
            failed: rows.len() - passed,
            rows,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("schema_version,problem,check,computed,oracle,tolerance,comparison,passed,provenance,anchor\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                self.schema_version,
                csv_field(&r.problem),
                csv_field(&r.check),
                format_sig17(r.computed),
                format_sig17(r.oracle),
                format_sig17(r.tolerance),
                r.comparison.as_str(),
                r.passed,
                r.provenance.as_str(),
                csv_field(&r.anchor)
            );
        }
        out
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
