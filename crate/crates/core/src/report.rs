//! Check reports: per-family residual summaries with the failing instances itemized.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numerics::{approx_eq, Scalar, Tolerance};

/// Failing instances kept per family; the total count is always exact.
pub const MAX_LISTED_FAILURES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Dimension,
    Structure,
}

impl std::fmt::Display for Tier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tier::Dimension => "dimension",
            Tier::Structure => "structure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: Vec<String>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub family: String,
    pub checked: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub argmax: Vec<String>,
    pub failures: Vec<Failure>,
}

impl FamilyResult {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Accumulates the instances of one diagram family in enumeration order.
#[derive(Debug, Clone)]
pub struct FamilyAcc {
    result: FamilyResult,
}

impl FamilyAcc {
    pub fn new(family: &str) -> Self {
        FamilyAcc {
            result: FamilyResult {
                family: family.to_string(),
                checked: 0,
                failed: 0,
                max_residual: 0.0,
                argmax: Vec::new(),
                failures: Vec::new(),
            },
        }
    }

    /// Records one instance with a precomputed residual and verdict.
    pub fn record(&mut self, index: impl FnOnce() -> Vec<String>, residual: f64, ok: bool) {
        let r = &mut self.result;
        r.checked += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        let needs_index = residual > r.max_residual || (r.checked == 1) || (!ok && r.failures.len() < MAX_LISTED_FAILURES);
        if !needs_index {
            if !ok {
                r.failed += 1;
            }
            return;
        }
        let idx = index();
        if residual > r.max_residual || r.checked == 1 {
            r.max_residual = residual;
            r.argmax = idx.clone();
        }
        if !ok {
            r.failed += 1;
            if r.failures.len() < MAX_LISTED_FAILURES {
                r.failures.push(Failure { index: idx, residual });
            }
        }
    }

    pub fn compare(&mut self, index: impl FnOnce() -> Vec<String>, lhs: Scalar, rhs: Scalar, tol: Tolerance) {
        let ok = approx_eq(lhs, rhs, tol) && lhs.is_finite() && rhs.is_finite();
        self.record(index, (lhs - rhs).norm(), ok);
    }

    pub fn compare_int(&mut self, index: impl FnOnce() -> Vec<String>, lhs: i64, rhs: i64) {
        self.record(index, (lhs - rhs).unsigned_abs() as f64, lhs == rhs);
    }

    /// Records a residual that passes when it is within the absolute tolerance.
    pub fn residual(&mut self, index: impl FnOnce() -> Vec<String>, residual: f64, tol: Tolerance) {
        self.record(index, residual, residual <= tol.abs_eps);
    }

    pub fn check(&mut self, index: impl FnOnce() -> Vec<String>, ok: bool) {
        self.record(index, if ok { 0.0 } else { 1.0 }, ok);
    }

    pub fn finish(self) -> FamilyResult {
        self.result
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub target: String,
    pub tier: Tier,
    pub tolerance: Tolerance,
    pub gauge: String,
    pub families: Vec<FamilyResult>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(suite: &str, target: &str, tier: Tier, tol: Tolerance) -> Self {
        CheckReport {
            suite: suite.to_string(),
            target: target.to_string(),
            tier,
            tolerance: tol,
            gauge: crate::GAUGE.to_string(),
            families: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, family: FamilyResult) {
        self.pass &= family.passed();
        self.families.push(family);
    }

    pub fn extend(&mut self, accs: BTreeMap<String, FamilyAcc>) {
        for acc in accs.into_values() {
            self.push(acc.finish());
        }
    }

    /// Folds `other` in, merging families of the same name in first-seen order.
    pub fn merge(&mut self, other: CheckReport) {
        for fam in other.families {
            match self.families.iter_mut().find(|f| f.family == fam.family) {
                Some(f) => {
                    f.checked += fam.checked;
                    f.failed += fam.failed;
                    if fam.max_residual > f.max_residual {
                        f.max_residual = fam.max_residual;
                        f.argmax = fam.argmax;
                    }
                    let room = MAX_LISTED_FAILURES.saturating_sub(f.failures.len());
                    f.failures.extend(fam.failures.into_iter().take(room));
                    self.pass &= f.failed == 0;
                }
                None => self.push(fam),
            }
        }
        self.notes.extend(other.notes);
        self.pass &= other.pass;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Marks the report failed for a reason that is not an enumerated instance.
    pub fn fail(&mut self, family: &str, reason: impl Into<String>) {
        let mut acc = FamilyAcc::new(family);
        let reason = reason.into();
        acc.record(|| vec![reason], f64::INFINITY, false);
        self.push(acc.finish());
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResult> {
        self.families.iter().find(|f| f.family == name)
    }

    pub fn failed_families(&self) -> Vec<&str> {
        self.families.iter().filter(|f| !f.passed()).map(|f| f.family.as_str()).collect()
    }

    pub fn checked(&self) -> usize {
        self.families.iter().map(|f| f.checked).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.families.iter().map(|f| f.max_residual).fold(0.0, f64::max)
    }

    /// The worst family and its argmax instance.
    pub fn argmax(&self) -> Option<(&str, &[String])> {
        self.families
            .iter()
            .fold(None::<&FamilyResult>, |best, f| match best {
                Some(b) if b.max_residual >= f.max_residual => Some(b),
                _ => Some(f),
            })
            .map(|f| (f.family.as_str(), f.argmax.as_slice()))
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{verdict}] {} on {} ({} tier): {} checks, max residual {:.3e}",
            self.suite,
            self.target,
            self.tier,
            self.checked(),
            self.max_residual()
        );
        if !self.pass {
            let failed = self.failed_families();
            line.push_str(&format!("; failing families: {}", failed.join(", ")));
            if let Some((fam, idx)) = self.argmax() {
                line.push_str(&format!("; argmax {fam} at ({})", idx.join(",")));
            }
        }
        line
    }
}
