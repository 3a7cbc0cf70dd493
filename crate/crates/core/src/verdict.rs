//! Five-state verdicts shared by every decision procedure.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    HoldsExact,
    HoldsNumeric,
    FailsExact,
    FailsNumeric,
    Inconclusive,
}

impl Status {
    pub fn holds(self) -> bool {
        matches!(self, Status::HoldsExact | Status::HoldsNumeric)
    }

    pub fn fails(self) -> bool {
        matches!(self, Status::FailsExact | Status::FailsNumeric)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Status::HoldsExact | Status::FailsExact)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::HoldsExact => "holds_exact",
            Status::HoldsNumeric => "holds_numeric",
            Status::FailsExact => "fails_exact",
            Status::FailsNumeric => "fails_numeric",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Conjunction of two graded statements.
    ///
    /// A definite failure dominates; otherwise any inconclusive part makes the
    /// whole inconclusive, and a holds is exact only if both parts are.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (FailsExact, _) | (_, FailsExact) => FailsExact,
            (FailsNumeric, _) | (_, FailsNumeric) => FailsNumeric,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (HoldsExact, HoldsExact) => HoldsExact,
            _ => HoldsNumeric,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// `(parameter, estimate)` pairs in the order they were produced.
    pub diagnostics: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn new(status: Status) -> Self {
        Verdict {
            status,
            diagnostics: Vec::new(),
            reason: None,
        }
    }

    pub fn with_reason(status: Status, reason: impl Into<String>) -> Self {
        Verdict {
            status,
            diagnostics: Vec::new(),
            reason: Some(reason.into()),
        }
    }

    pub fn diag(mut self, name: impl Into<String>, value: f64) -> Self {
        self.diagnostics.push((name.into(), value));
        self
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.diagnostics.push((name.into(), value));
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_table() {
        use Status::*;
        assert_eq!(HoldsExact.and(HoldsExact), HoldsExact);
        assert_eq!(HoldsExact.and(HoldsNumeric), HoldsNumeric);
        assert_eq!(HoldsNumeric.and(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.and(FailsNumeric), FailsNumeric);
        assert_eq!(FailsNumeric.and(FailsExact), FailsExact);
    }

    #[test]
    fn serializes_snake_case() {
        let v = Verdict::new(Status::HoldsNumeric).diag("sup", 1.5);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"holds_numeric\""));
        assert!(s.contains("[\"sup\",1.5]"));
    }
}
