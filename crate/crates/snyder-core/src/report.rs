//! Machine-readable verification reports.
//!
//! Every suite emits a [`Report`]: the convention ledger travels with the
//! numbers so results are interpretable without reading the code, and each
//! record carries an anchor string naming the module and identity it
//! verifies. Serialization is deterministic; reruns with the same seed
//! produce byte-identical bodies apart from the wall time.

use serde::Serialize;

/// The sign and normalization choices everything downstream depends on.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConventionLedger {
    /// Diagonal ambient metric, e.g. `"(+,-,-,-,-)"`.
    pub ambient_signature: String,
    /// Generator normalization statement.
    pub generator_normalization: String,
    /// Bilinear form used for `p·q` in chart formulas.
    pub momentum_bilinear_form: String,
    /// Sign `s` in `⟨x_μ,x_ν,x_α⟩_* = s·(η_{να}x_μ − η_{μα}x_ν)/κ²`
    /// with `η` the stabilizer block `(+,−,−,−)`.
    pub star_triple_sign: i8,
}

impl Default for ConventionLedger {
    fn default() -> Self {
        ConventionLedger {
            ambient_signature: "(+,-,-,-,-)".into(),
            generator_normalization: "J[A][B]: (J_AB)^C_D = delta^C_A eta_BD - delta^C_B eta_AD"
                .into(),
            momentum_bilinear_form: "dot_mm(p,q) = p0*q0 - p.q (timelike positive); \
                 quoted first-order formulas read with the opposite sign"
                .into(),
            star_triple_sign: -1,
        }
    }
}

/// Status of one verified property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One verified property with its anchor and residual.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    /// Short name of the check.
    pub name: String,
    /// `module/identity` anchor tying the record to its source.
    pub anchor: String,
    pub status: Status,
    pub max_residual: Option<f64>,
    /// Counterexample or context on failure.
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn pass(name: &str, anchor: &str, residual: Option<f64>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            max_residual: residual,
            witness: None,
        }
    }

    pub fn fail(name: &str, anchor: &str, residual: Option<f64>, witness: String) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Fail,
            max_residual: residual,
            witness: Some(witness),
        }
    }
}

/// A full suite report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub conventions: ConventionLedger,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    /// Wall time in milliseconds; excluded from the reproducibility body.
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(suite: &str, seed: u64, samples: usize, checks: Vec<CheckRecord>) -> Self {
        let passed = checks.iter().all(|c| c.status == Status::Pass);
        Report {
            suite: suite.into(),
            conventions: ConventionLedger::default(),
            seed,
            samples,
            checks,
            passed,
            wall_time_ms: 0,
        }
    }

    /// Serialization of everything except the wall time: the deterministic
    /// body that reruns with the same seed must reproduce byte for byte.
    pub fn body_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_time_ms = 0;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_is_stable_under_wall_time_changes() {
        let mut r = Report::new(
            "demo",
            7,
            10,
            vec![CheckRecord::pass("x", "kloop/left_bol", Some(1e-12))],
        );
        let a = r.body_json();
        r.wall_time_ms = 12345;
        let b = r.body_json();
        assert_eq!(a, b);
        assert!(r.passed);
    }

    #[test]
    fn failure_marks_the_report() {
        let r = Report::new(
            "demo",
            7,
            10,
            vec![
                CheckRecord::pass("x", "a/b", None),
                CheckRecord::fail("y", "a/c", Some(0.5), "tuple (1,2)".into()),
            ],
        );
        assert!(!r.passed);
    }
}
