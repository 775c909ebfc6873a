//! Report structures shared by the check-valued operations.
//!
//! Every check records the tag of the governing identity (`eq`), the measured
//! values, a signed margin where one makes sense (nonnegative = pass), and a
//! verdict. Reports serialize to JSON in insertion order so identical runs
//! produce identical bytes.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Tag of the identity or inequality this check instantiates.
    pub paper_eq: String,
    pub values: Vec<f64>,
    pub margin: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, eq: impl Into<String>, pass: bool) -> Check {
        Check {
            name: name.into(),
            paper_eq: eq.into(),
            values: Vec::new(),
            margin: None,
            pass,
            note: None,
        }
    }

    pub fn with_values(mut self, values: Vec<f64>) -> Check {
        self.values = values;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Check {
        self.margin = Some(margin);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CheckReport {
    pub fn from_checks(checks: Vec<Check>) -> CheckReport {
        let pass = checks.iter().all(|c| c.pass);
        CheckReport { checks, pass }
    }

    pub fn push(&mut self, check: Check) {
        self.pass = self.checks.is_empty().then_some(check.pass).unwrap_or(self.pass && check.pass);
        self.checks.push(check);
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
