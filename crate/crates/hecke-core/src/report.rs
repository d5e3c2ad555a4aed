//! Machine-readable check results shared by the verification suites, the
//! command-line front end and the integration tests.

use crate::field::FieldSpec;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// One named verification with a short witness string (a dimension, a
/// rendered scalar, a matrix shape) for the report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witness: String,
}

impl Check {
    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            witness: witness.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// A full run: the command that produced it, the field it ran over, and the
/// outcome of every check. Wall-clock data deliberately stays out so the
/// serialized report is byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, field: Option<FieldSpec>) -> RunReport {
        RunReport { command: command.into(), field, checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: Vec<Check>) {
        self.checks.extend(checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_statuses() {
        let mut r = RunReport::new("verify", None);
        r.push(Check::from_bool("a", true, "1"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::from_bool("b", false, "0"));
        assert_eq!(r.exit_code(), 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"status\":\"fail\""));
        assert!(!json.contains("field"));
    }
}
