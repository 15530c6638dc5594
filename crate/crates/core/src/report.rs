//! Seeded trial execution and the JSON report schema.
//!
//! Trials are keyed by `(base_seed, trial_index)` through
//! [`derive_trial_seed`](crate::seed::derive_trial_seed); they run on the
//! current rayon pool, are collected in index order, and are aggregated
//! sequentially, so a report depends only on its inputs.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::ComplexMatrix;
use crate::seed::derive_trial_seed;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One failing trial, with what is needed to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial: u64,
    pub trial_seed: u64,
    /// `midpoint`, `second_difference`, or an inequality name.
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub step: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// Amount by which the relation fails; positive for a violation.
    pub gap: f64,
    pub tol: f64,
    pub confirmed: bool,
    pub params: BTreeMap<String, f64>,
    pub digest: String,
}

/// Result of a single trial.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Completed { slack: f64, violation: Option<ViolationRecord> },
    Skipped { reason: String },
}

impl TrialOutcome {
    pub fn passed(slack: f64) -> Self {
        TrialOutcome::Completed { slack, violation: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub trials_attempted: u64,
    pub trials_completed: u64,
    pub trials_skipped: u64,
    pub violations: Vec<ViolationRecord>,
    pub confirmed_violations: u64,
    /// Smallest slack among passing trials.
    pub min_slack: Option<f64>,
    /// Largest gap (negated slack) among completed trials.
    pub max_gap: Option<f64>,
    pub wall_time_ms: u64,
}

impl ProbeReport {
    pub fn from_outcomes(
        command: impl Into<String>,
        seed: u64,
        outcomes: Vec<TrialOutcome>,
        wall_time_ms: u64,
    ) -> Self {
        let mut report = ProbeReport {
            tool_version: TOOL_VERSION.to_string(),
            command: command.into(),
            seed,
            trials_attempted: outcomes.len() as u64,
            trials_completed: 0,
            trials_skipped: 0,
            violations: Vec::new(),
            confirmed_violations: 0,
            min_slack: None,
            max_gap: None,
            wall_time_ms,
        };
        for outcome in outcomes {
            match outcome {
                TrialOutcome::Skipped { .. } => report.trials_skipped += 1,
                TrialOutcome::Completed { slack, violation } => {
                    report.trials_completed += 1;
                    let gap = -slack;
                    report.max_gap = Some(report.max_gap.map_or(gap, |g| g.max(gap)));
                    match violation {
                        Some(v) => {
                            report.confirmed_violations += v.confirmed as u64;
                            report.violations.push(v);
                        }
                        None => report.min_slack = Some(report.min_slack.map_or(slack, |s| s.min(slack))),
                    }
                }
            }
        }
        report.violations.sort_by(|a, b| a.trial.cmp(&b.trial).then(a.check.cmp(&b.check)));
        report
    }

    pub fn passed(&self) -> bool {
        self.confirmed_violations == 0
    }

    /// Process exit code: 1 with confirmed violations, 3 when every trial
    /// was skipped, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.passed() {
            1
        } else if self.trials_completed == 0 && self.trials_attempted > 0 {
            3
        } else {
            0
        }
    }

    /// Pretty JSON with fixed key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with `wall_time_ms` zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.wall_time_ms = 0;
        r.to_json()
    }
}

/// Runs `trial(index, trial_seed)` for every index on the current rayon
/// pool and returns the outcomes in index order.
pub fn run_trials<F>(trials: u64, base_seed: u64, trial: F) -> Vec<TrialOutcome>
where
    F: Fn(u64, u64) -> TrialOutcome + Sync + Send,
{
    (0..trials).into_par_iter().map(|i| trial(i, derive_trial_seed(base_seed, i))).collect()
}

/// FNV-1a over the bit patterns of matrices and scalars; identifies trial
/// inputs in reports.
#[derive(Debug, Clone)]
pub struct Digest(u64);

impl Default for Digest {
    fn default() -> Self {
        Digest(0xcbf2_9ce4_8422_2325)
    }
}

impl Digest {
    pub fn new() -> Self {
        Self::default()
    }

    fn bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    pub fn scalar(mut self, x: f64) -> Self {
        self.bytes(&x.to_bits().to_le_bytes());
        self
    }

    pub fn matrix(mut self, m: &ComplexMatrix) -> Self {
        self.bytes(&(m.nrows() as u64).to_le_bytes());
        self.bytes(&(m.ncols() as u64).to_le_bytes());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                self.bytes(&m[(i, j)].re.to_bits().to_le_bytes());
                self.bytes(&m[(i, j)].im.to_bits().to_le_bytes());
            }
        }
        self
    }

    pub fn finish(&self) -> String {
        format!("{:016x}", self.0)
    }
}

/// Matrix file format: `{"n": n, "re": [[..]], "im": [[..]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid("matrix files hold square matrices"));
        }
        let n = m.nrows();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
        Ok(Self { n, re, im })
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::invalid("field `n`: must be positive"));
        }
        for (field, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                return Err(Error::invalid(format!("field `{field}`: expected {n} rows, found {}", rows.len())));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::invalid(format!(
                        "field `{field}` row {i}: expected {n} entries, found {}",
                        row.len()
                    )));
                }
            }
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| crate::hermitian::C64::new(self.re[i][j], self.im[i][j]));
        crate::hermitian::ensure_finite(&m)?;
        Ok(m)
    }
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    file.to_matrix().map_err(|e| match e {
        Error::InvalidInput(msg) => Error::invalid(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_matrix(m: &ComplexMatrix, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&MatrixFile::from_matrix(m)?).expect("matrix serializes");
    std::fs::write(path, json + "\n").map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

/// Writes any serializable report as pretty UTF-8 JSON.
pub fn write_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(path, json + "\n").map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{sample, SampleKind};

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        let m = sample(SampleKind::General, 3, 1, 1.0);
        write_matrix(&m, &path).unwrap();
        assert_eq!(load_matrix(&path).unwrap(), m);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"n": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]}"#).unwrap();
        let err = load_matrix(&path).unwrap_err().to_string();
        assert!(err.contains("`re`"), "{err}");
        std::fs::write(&path, r#"{"n": 1, "re": [[1]], "im": [[0]], "extra": 1}"#).unwrap();
        assert!(load_matrix(&path).unwrap_err().to_string().contains("line"));
    }

    #[test]
    fn aggregation_is_sorted_and_counted() {
        let v = |trial: u64, confirmed| ViolationRecord {
            trial,
            trial_seed: trial,
            check: "midpoint".into(),
            tau: Some(0.5),
            step: None,
            lhs: 1.0,
            rhs: 0.0,
            gap: 1.0,
            tol: 1e-9,
            confirmed,
            params: BTreeMap::new(),
            digest: String::new(),
        };
        let outcomes = vec![
            TrialOutcome::Completed { slack: -1.0, violation: Some(v(2, true)) },
            TrialOutcome::passed(0.25),
            TrialOutcome::Skipped { reason: "x".into() },
            TrialOutcome::Completed { slack: -1.0, violation: Some(v(0, false)) },
            TrialOutcome::passed(0.5),
        ];
        let r = ProbeReport::from_outcomes("probe", 7, outcomes, 3);
        assert_eq!((r.trials_attempted, r.trials_completed, r.trials_skipped), (5, 4, 1));
        assert_eq!(r.violations.iter().map(|v| v.trial).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(r.confirmed_violations, 1);
        assert_eq!(r.min_slack, Some(0.25));
        assert_eq!(r.max_gap, Some(1.0));
        assert_eq!(r.exit_code(), 1);
        let back: ProbeReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn digest_sensitive_to_bits() {
        let a = Digest::new().scalar(1.0).finish();
        let b = Digest::new().scalar(1.0 + f64::EPSILON).finish();
        assert_ne!(a, b);
        assert_eq!(a, Digest::new().scalar(1.0).finish());
    }
}
