//! Pass/fail reports for identity checks.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::qscalar::QScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }

    /// Process exit code: 0 pass, 1 fail, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub pairs_checked: usize,
    pub status: Status,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(identity: impl Into<String>) -> Self {
        CheckReport {
            identity: identity.into(),
            params: BTreeMap::new(),
            pairs_checked: 0,
            status: Status::Pass,
            failures: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn record(&mut self, instance: String, outcome: Outcome) {
        self.pairs_checked += 1;
        let failure = match outcome {
            Outcome::Pass => return,
            Outcome::Fail { lhs, rhs, detail } => Failure {
                instance,
                status: Status::Fail,
                lhs,
                rhs,
                detail,
            },
            Outcome::Inconclusive(why) => Failure {
                instance,
                status: Status::Inconclusive,
                lhs: None,
                rhs: None,
                detail: Some(why),
            },
        };
        self.status = self.status.max(failure.status);
        self.failures.push(failure);
    }

    /// Folds another report's instances into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.pairs_checked += other.pairs_checked;
        self.status = self.status.max(other.status);
        for mut f in other.failures {
            f.instance = format!("{}: {}", other.identity, f.instance);
            self.failures.push(f);
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{} [{}] {} checked, {} failing",
            self.identity,
            self.status,
            self.pairs_checked,
            self.failures.iter().filter(|f| f.status == Status::Fail).count()
        )
    }
}

/// Overall status of several reports.
pub fn combined_status<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> Status {
    reports.into_iter().map(|r| r.status).max().unwrap_or(Status::Pass)
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Pass,
    Fail {
        lhs: Option<String>,
        rhs: Option<String>,
        detail: Option<String>,
    },
    Inconclusive(String),
}

impl Outcome {
    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome::Fail {
            lhs: None,
            rhs: None,
            detail: Some(detail.into()),
        }
    }

    pub fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::fail(detail())
        }
    }
}

/// How often a comparison may widen the window before giving up.
pub const WIDENINGS: u32 = 3;
/// Window growth per widening.
pub const WIDEN_FACTOR: u32 = 4;

/// Evaluates both sides and compares them; when the common window is too
/// narrow, or an intermediate sum did not settle, retries with a wider window.
pub fn compare_with_widening(ctx: &Ctx, sides: impl Fn(&Ctx) -> Result<(QScalar, QScalar)>) -> Outcome {
    let mut c = *ctx;
    let mut last = String::new();
    for attempt in 0..=WIDENINGS {
        if attempt > 0 {
            c = c.with_window(c.ring.window * WIDEN_FACTOR);
        }
        let (lhs, rhs) = match sides(&c) {
            Ok(x) => x,
            Err(e @ (Error::Inconclusive(_) | Error::CutoffExceeded(_))) => {
                last = e.to_string();
                continue;
            }
            Err(e) => return Outcome::fail(e.to_string()),
        };
        match lhs.agree_on_common_window(&rhs, c.min_width) {
            Ok(a) if a.is_equal() => return Outcome::Pass,
            Ok(a) => {
                return Outcome::Fail {
                    lhs: Some(lhs.to_string()),
                    rhs: Some(rhs.to_string()),
                    detail: Some(format!("{a:?}")),
                }
            }
            Err(e) => last = e.to_string(),
        }
    }
    Outcome::Inconclusive(last)
}

/// Runs `f` on every instance in parallel and records the outcomes in
/// input order.
pub fn run_instances<I: Sync>(
    report: &mut CheckReport,
    instances: &[I],
    label: impl Fn(&I) -> String + Sync,
    f: impl Fn(&I) -> Outcome + Sync,
) {
    let outcomes: Vec<(String, Outcome)> = instances.par_iter().map(|i| (label(i), f(i))).collect();
    for (l, o) in outcomes {
        report.record(l, o);
    }
}
