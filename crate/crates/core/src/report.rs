//! Residual reports produced by every checker.

use alloc::string::String;
use alloc::vec::Vec;

/// One verified identity: its Frobenius residual and the bound it must meet.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Short mathematical statement of the identity being checked.
    pub anchor: String,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.threshold
    }
}

/// Ordered list of checks plus recorded (unchecked) quantities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Scalars recorded for information only, e.g. `i†i` of a Q-system.
    pub notes: Vec<(String, f64)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, anchor: impl Into<String>, residual: f64, threshold: f64) {
        self.checks.push(Check { name: name.into(), anchor: anchor.into(), residual, threshold });
    }

    pub fn note(&mut self, name: impl Into<String>, value: f64) {
        self.notes.push((name.into(), value));
    }

    /// Append the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = [prefix, " ", &c.name].concat();
            }
            self.checks.push(c);
        }
        for (n, v) in other.notes {
            let name = if prefix.is_empty() { n } else { [prefix, " ", &n].concat() };
            self.notes.push((name, v));
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Largest residual (NaN counts as infinite); 0 for an empty report.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| if c.residual.is_nan() { f64::INFINITY } else { c.residual })
            .fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn group<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    /// Replace every threshold (used when a caller applies a uniform bound).
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        for c in &mut self.checks {
            c.threshold = threshold;
        }
        self
    }
}
