//! Named verification outcomes shared by the reports.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// Set when the check does not apply; `pass` is then `true`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, witness: None, skipped: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, witness: Some(witness.into()), skipped: None }
    }

    pub fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, witness: None, skipped: Some(reason.into()) }
    }

    /// Passes iff `ok`; the witness is only built on failure.
    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    /// Compares two values, recording both on mismatch.
    pub fn equal<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, found: T, expected: T) -> Self {
        let ok = found == expected;
        Check::from_bool(name, ok, || format!("found {found:?}, expected {expected:?}"))
    }
}

/// True when every check passed (skipped checks count as passed).
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
