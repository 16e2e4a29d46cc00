//! Check entries and the aggregate verification report.
//!
//! Every check reduces to an exact integer inequality `lhs ≤ rhs`; the
//! recorded slack is `rhs − lhs` and an entry passes iff its slack is
//! non-negative. Equality requirements are encoded as `|difference| ≤ 0`
//! so the same rule covers them. Values are computed in `i128` and only
//! saturated to `i64` for serialization.

use serde::Serialize;

/// One verified inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    /// Which check produced this entry.
    pub name: String,
    /// What it applies to (a client, facility, path, cycle, ...).
    pub subject: String,
    /// Left-hand side (saturated to i64 for serialization).
    pub lhs: i64,
    /// Right-hand side (saturated).
    pub rhs: i64,
    /// rhs − lhs (computed exactly, then saturated).
    pub slack: i64,
    /// `lhs ≤ rhs`, decided on the exact values.
    pub pass: bool,
}

/// Saturate an exact value into the serializable range.
pub fn sat_i64(v: i128) -> i64 {
    v.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

impl CheckEntry {
    /// Entry asserting `lhs ≤ rhs` (exact in i128).
    pub fn bound(name: &str, subject: impl Into<String>, lhs: i128, rhs: i128) -> CheckEntry {
        CheckEntry {
            name: name.to_string(),
            subject: subject.into(),
            lhs: sat_i64(lhs),
            rhs: sat_i64(rhs),
            slack: sat_i64(rhs - lhs),
            pass: lhs <= rhs,
        }
    }

    /// Entry asserting `a == b`, encoded as `|a − b| ≤ 0`.
    pub fn equality(name: &str, subject: impl Into<String>, a: i128, b: i128) -> CheckEntry {
        CheckEntry::bound(name, subject, (a - b).abs(), 0)
    }

    /// Entry asserting a violation count is zero.
    pub fn zero_violations(name: &str, subject: impl Into<String>, violations: u64) -> CheckEntry {
        CheckEntry::bound(name, subject, violations as i128, 0)
    }

    /// Failing entry for a quantity that cannot be computed exactly —
    /// a product beyond 128 bits or an infinite distance. Verdicts are
    /// never guessed from clamped values.
    pub fn not_computable(name: &str, subject: impl Into<String>) -> CheckEntry {
        CheckEntry {
            name: name.to_string(),
            subject: format!("{} (not exactly computable)", subject.into()),
            lhs: 0,
            rhs: 0,
            slack: 0,
            pass: false,
        }
    }
}

/// Aggregate result of a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// All entries, in emission order.
    pub checks: Vec<CheckEntry>,
    /// Which classification variant the entries refer to
    /// ("path-decomposition", "capture-based", or "both").
    pub variant: String,
    /// The class parameter the run used.
    pub t: u64,
    /// `true` iff every entry passes.
    pub pass: bool,
    /// Human-readable explanations for skipped or inapplicable checks.
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Assemble a report; the overall verdict is derived from the entries.
    pub fn new(checks: Vec<CheckEntry>, variant: &str, t: u64, notes: Vec<String>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerificationReport {
            checks,
            variant: variant.to_string(),
            t,
            pass,
            notes,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_entries_record_exact_slack_and_verdict() {
        let e = CheckEntry::bound("demo", "x", 3, 10);
        assert_eq!(e.slack, 7);
        assert!(e.pass);
        let e = CheckEntry::bound("demo", "x", 11, 10);
        assert_eq!(e.slack, -1);
        assert!(!e.pass);
        // Boundary: equality passes.
        assert!(CheckEntry::bound("demo", "x", 10, 10).pass);
    }

    #[test]
    fn saturation_keeps_verdicts_while_clamping_display() {
        let huge = i128::from(i64::MAX) * 4;
        let e = CheckEntry::bound("demo", "x", -huge, huge);
        assert!(e.pass);
        assert_eq!(e.lhs, i64::MIN);
        assert_eq!(e.rhs, i64::MAX);
        assert_eq!(e.slack, i64::MAX);
        // The verdict uses exact values even when both sides clamp equal.
        let e = CheckEntry::bound("demo", "x", huge + 1, huge);
        assert!(!e.pass);
        assert_eq!(e.lhs, e.rhs);
        assert_eq!(e.slack, -1);
    }

    #[test]
    fn equality_entries_fail_on_any_difference() {
        assert!(CheckEntry::equality("demo", "x", 5, 5).pass);
        assert!(!CheckEntry::equality("demo", "x", 5, 6).pass);
        assert!(!CheckEntry::equality("demo", "x", 6, 5).pass);
        assert_eq!(CheckEntry::equality("demo", "x", 6, 5).slack, -1);
    }

    #[test]
    fn report_verdict_and_json_shape() {
        let checks = vec![
            CheckEntry::bound("a", "s1", 1, 2),
            CheckEntry::bound("b", "s2", 2, 2),
        ];
        let report = VerificationReport::new(checks, "both", 2, vec!["note".into()]);
        assert!(report.pass);
        let json = report.to_json_string();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["variant"], "both");
        assert_eq!(v["t"], 2);
        assert_eq!(v["pass"], true);
        assert_eq!(v["checks"][0]["name"], "a");
        assert_eq!(v["checks"][0]["slack"], 1);
        assert_eq!(v["checks"][1]["subject"], "s2");
        assert_eq!(v["notes"][0], "note");
        assert!(json.ends_with('\n'));

        let failing = VerificationReport::new(
            vec![CheckEntry::bound("a", "s", 3, 2)],
            "both",
            2,
            vec![],
        );
        assert!(!failing.pass);
    }
}
