//! Pass/fail reports for algebraic identity checks.

use serde::Serialize;

/// Result of one residual check of an operator identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity_name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    /// Record a residual against an absolute tolerance.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        IdentityCheck {
            identity_name: name.into(),
            max_residual: residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// A batch of identity checks produced by one verification operation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<IdentityCheck>,
}

impl VerificationReport {
    pub fn push(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&IdentityCheck> {
        self.checks
            .iter()
            .max_by(|a, b| {
                let ra = a.max_residual / a.tolerance;
                let rb = b.max_residual / b.tolerance;
                ra.partial_cmp(&rb).unwrap()
            })
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}
