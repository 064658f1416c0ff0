//! Outcomes of the verification checks.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

/// A falsified instance: a short description plus the data needed to replay
/// it.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub what: String,
    pub data: Value,
}

impl Failure {
    pub fn new(what: impl Into<String>, data: Value) -> Self {
        Failure { what: what.into(), data }
    }
}

/// What a passing check looked at.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Stats {
    pub fn new(checked: usize) -> Self {
        Stats { checked, note: None }
    }

    pub fn with_note(checked: usize, note: impl Into<String>) -> Self {
        Stats {
            checked,
            note: Some(note.into()),
        }
    }
}

pub type Check = std::result::Result<Stats, Failure>;

/// Return types a [`Failure`] can bail out of.
pub trait FromFailure {
    fn from_failure(f: Failure) -> Self;
}

impl<T> FromFailure for std::result::Result<T, Failure> {
    fn from_failure(f: Failure) -> Self {
        Err(f)
    }
}

impl<T> FromFailure for crate::Result<std::result::Result<T, Failure>> {
    fn from_failure(f: Failure) -> Self {
        Ok(Err(f))
    }
}

/// Bails out of a check with a [`Failure`].
#[macro_export]
macro_rules! ensure {
    ($cond:expr, $what:expr, $($data:tt)+) => {
        if !$cond {
            return $crate::report::FromFailure::from_failure($crate::report::Failure::new(
                $what,
                serde_json::json!($($data)+),
            ));
        }
    };
}

/// One line of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub statement: String,
    pub instance: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub millis: u128,
}

impl VerifyReport {
    /// Runs `check`, timing it. Errors from the check itself (caps, bad
    /// parameters) give `Unknown`.
    pub fn run(
        statement: &str,
        instance: impl Into<String>,
        check: impl FnOnce() -> crate::Result<Check>,
    ) -> VerifyReport {
        let start = Instant::now();
        let result = check();
        Self::from_result(statement, instance, result, start.elapsed().as_millis())
    }

    /// A report for a result computed elsewhere, e.g. by a pass that checks
    /// several statements at once.
    pub fn from_result(
        statement: &str,
        instance: impl Into<String>,
        result: crate::Result<Check>,
        millis: u128,
    ) -> VerifyReport {
        let (outcome, counterexample, stats, error) = match result {
            Ok(Ok(s)) => (Outcome::Pass, None, Some(s), None),
            Ok(Err(f)) => (Outcome::Fail, Some(f), None, None),
            Err(e) => (Outcome::Unknown, None, None, Some(e.to_string())),
        };
        VerifyReport {
            statement: statement.to_string(),
            instance: instance.into(),
            outcome,
            counterexample,
            stats,
            error,
            millis,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        };
        let mut s = format!("{tag:7} {:<22} {} ({} ms)", self.statement, self.instance, self.millis);
        if let Some(st) = &self.stats {
            s.push_str(&format!(" [{} checked", st.checked));
            if let Some(n) = &st.note {
                s.push_str(&format!("; {n}"));
            }
            s.push(']');
        }
        if let Some(f) = &self.counterexample {
            s.push_str(&format!(" :: {} {}", f.what, f.data));
        }
        if let Some(e) = &self.error {
            s.push_str(&format!(" :: {e}"));
        }
        s
    }
}

/// Exit status for a list of reports: 0 all pass, 1 any fail, 2 unknowns
/// but no fail.
pub fn exit_status(reports: &[VerifyReport]) -> i32 {
    if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        1
    } else if reports.iter().any(|r| r.outcome == Outcome::Unknown) {
        2
    } else {
        0
    }
}
