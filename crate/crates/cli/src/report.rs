//! Verification report: sections of named checks, serialized as JSON with a
//! fixed key order so identical runs give identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Bridge sign the expected value depends on, e.g. `s46=-1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bridge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `residual <= tolerance`; NaN never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            bridge: None,
            note: None,
        }
    }

    /// A check that must be strictly positive, reported as `residual = value`.
    pub fn positive(name: impl Into<String>, value: f64) -> Self {
        Check {
            passed: value > 0.0,
            ..Check::new(name, value, 0.0)
        }
    }

    /// A computation that could not be carried out.
    pub fn failed(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            passed: false,
            note: Some(why.into()),
            ..Check::new(name, f64::NAN, 0.0)
        }
    }

    pub fn with_bridge(mut self, bridge: impl Into<String>) -> Self {
        self.bridge = Some(bridge.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Section {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn new(checks: Vec<Check>) -> Self {
        Section {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config_hash: String,
    pub bridge_signs: BTreeMap<&'static str, i8>,
    pub passed: bool,
    pub sections: BTreeMap<String, Section>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> Vec<String> {
        self.sections
            .iter()
            .flat_map(|(name, sec)| {
                sec.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("{name}: {}", c.name))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        assert!(!Check::new("x", f64::NAN, 1.0).passed);
        assert!(Check::new("x", 0.5, 1.0).passed);
        assert!(!Check::positive("w", 0.0).passed);
    }

    #[test]
    fn section_passes_only_if_all_checks_pass() {
        let s = Section::new(vec![Check::new("a", 0.0, 1.0), Check::new("b", 2.0, 1.0)]);
        assert!(!s.passed);
    }
}
