use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One named check with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Distance from failing in the check's own units; negative on failure.
    pub worst_margin: f64,
    /// The check's test statistic, if it has one (TV distance, KS statistic).
    pub statistic: Option<f64>,
    pub samples: u64,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            worst_margin: f64::INFINITY,
            statistic: None,
            samples: 0,
            seed: None,
            tolerance: 0.0,
            detail: String::new(),
        }
    }

    /// A negative control: the wrapped check passes exactly when `inner`
    /// failed.
    pub fn expect_failure(name: impl Into<String>, inner: CheckRecord) -> Self {
        Self {
            name: name.into(),
            passed: !inner.passed,
            detail: format!(
                "{} {}: {}",
                inner.name,
                if inner.passed { "unexpectedly passed" } else { "failed as required" },
                inner.detail
            ),
            ..inner
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub construction_id: String,
    /// Sorted by name.
    pub checks: Vec<CheckRecord>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(construction_id: impl Into<String>, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let overall = checks.iter().all(|c| c.passed);
        Self {
            construction_id: construction_id.into(),
            checks,
            overall,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("construction {}\n", self.construction_id);
        for c in &self.checks {
            let _ = write!(
                out,
                "{} {} margin={:e} samples={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst_margin,
                c.samples
            );
            if let Some(s) = c.statistic {
                let _ = write!(out, " statistic={s:e}");
            }
            if let Some(seed) = c.seed {
                let _ = write!(out, " seed={seed}");
            }
            let _ = writeln!(out, " tol={:e}", c.tolerance);
            if !c.detail.is_empty() {
                let _ = writeln!(out, "    {}", c.detail);
            }
        }
        let _ = writeln!(out, "overall {}", if self.overall { "PASS" } else { "FAIL" });
        out
    }
}

/// 64-bit FNV-1a, used for stable content identifiers.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction_and_checks_are_sorted() {
        let mut bad = CheckRecord::new("b");
        bad.passed = false;
        let r = VerificationReport::new("x", vec![bad.clone(), CheckRecord::new("a")]);
        assert!(!r.overall);
        assert_eq!(r.checks[0].name, "a");
        let control = CheckRecord::expect_failure("c", bad);
        assert!(control.passed);
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }
}
