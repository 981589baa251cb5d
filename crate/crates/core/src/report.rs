//! Structured verification reports shared by every suite.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Failed an identity that is only conjectured; reported, not fatal.
    Flagged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, identity: impl Into<String>, residual: f64) {
        self.checks.push(Check {
            identity: identity.into(),
            status: Status::Pass,
            witness: None,
            residual,
        });
    }

    pub fn fail(&mut self, identity: impl Into<String>, witness: impl Into<String>, residual: f64) {
        self.checks.push(Check {
            identity: identity.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            residual,
        });
    }

    /// Record a check from the first witness found (if any).
    pub fn record(&mut self, identity: impl Into<String>, witness: Option<String>, residual: f64) {
        match witness {
            None => self.pass(identity, residual),
            Some(w) => self.fail(identity, w, residual),
        }
    }

    /// Pass iff the residual is within [`crate::TOL`].
    pub fn check(&mut self, identity: impl Into<String>, residual: f64) {
        let w = (residual > crate::TOL || residual.is_nan()).then(|| format!("residual {residual:.3e}"));
        self.record(identity, w, residual);
    }

    /// Soft variant of [`Report::check`].
    pub fn check_soft(&mut self, identity: impl Into<String>, residual: f64) {
        let w = (residual > crate::TOL || residual.is_nan()).then(|| format!("residual {residual:.3e}"));
        self.record_soft(identity, w, residual);
    }

    /// Like [`Report::record`], but a failure is downgraded to `Flagged`.
    pub fn record_soft(&mut self, identity: impl Into<String>, witness: Option<String>, residual: f64) {
        let flagged = witness.is_some();
        self.record(identity, witness, residual);
        if flagged {
            self.checks.last_mut().unwrap().status = Status::Flagged;
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, identity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.identity == identity)
    }
}
