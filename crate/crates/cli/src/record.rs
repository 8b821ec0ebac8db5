//! Result records and CSV tables.

use std::fmt::Write as _;

use serde::Serialize;

/// One verified quantity; `pass = |value − reference| ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        Self {
            name: name.into(),
            value,
            reference,
            tolerance,
            pass,
        }
    }

    /// A boolean property recorded as `1` against reference `1`.
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Self::new(name, if holds { 1.0 } else { 0.0 }, 1.0, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub scenario: String,
    pub preset: String,
    pub seed: u64,
    pub n_angles: usize,
    pub n_radii: usize,
    pub p: f64,
    pub checks: Vec<Check>,
    /// Diagnostics that are not pass/fail, such as non-certified endpoints.
    pub notes: Vec<String>,
    pub passed: bool,
    pub runtime_seconds: f64,
    pub version: String,
}

impl ResultRecord {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// A table with columns `x, value[, reference, abs_error]`, where `x` is the
/// boundary angle, level or refinement size of the row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    abscissa: &'static str,
    with_reference: bool,
    rows: Vec<(f64, f64, Option<f64>)>,
}

impl Table {
    pub fn new(abscissa: &'static str, with_reference: bool) -> Self {
        Self {
            abscissa,
            with_reference,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, x: f64, value: f64, reference: Option<f64>) {
        debug_assert_eq!(reference.is_some(), self.with_reference);
        self.rows.push((x, value, reference));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV text with 17 significant digits per number.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.abscissa);
        out.push_str(if self.with_reference {
            ",value,reference,abs_error\n"
        } else {
            ",value\n"
        });
        for &(x, value, reference) in &self.rows {
            let _ = write!(out, "{x:.16e},{value:.16e}");
            if let Some(r) = reference {
                let _ = write!(out, ",{r:.16e},{:.16e}", (value - r).abs());
            }
            out.push('\n');
        }
        out
    }
}
