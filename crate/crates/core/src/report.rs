//! JSON verification reports.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

/// Where a checked claim comes from: a topic and the claimed formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub section: String,
    pub claim: String,
}

impl Anchor {
    pub fn new(section: &str, claim: &str) -> Self {
        Anchor {
            section: section.to_string(),
            claim: claim.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: Anchor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r#box: Option<(Vec<i64>, Vec<i64>)>,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// A check that passes iff `residual < tolerance`; NaN fails.
    pub fn pass_class(
        id: impl Into<String>,
        anchor: Anchor,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        let status = if residual < tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            tolerance: Some(tolerance),
            status,
            ..Self::bare(id.into(), anchor, residual)
        }
    }

    pub fn report_only(id: impl Into<String>, anchor: Anchor, residual: f64) -> Self {
        Check {
            status: Status::ReportOnly,
            ..Self::bare(id.into(), anchor, residual)
        }
    }

    /// A yes/no outcome expressed as residual 0 (as expected) or 1.
    pub fn verdict(id: impl Into<String>, anchor: Anchor, as_expected: bool) -> Self {
        Self::pass_class(id, anchor, if as_expected { 0.0 } else { 1.0 }, 0.5)
    }

    fn bare(id: String, anchor: Anchor, residual: f64) -> Self {
        Check {
            id,
            anchor,
            semantics: None,
            mass_term: None,
            convention: None,
            n: None,
            h: None,
            m: None,
            r#box: None,
            max_residual: residual,
            tolerance: None,
            status: Status::ReportOnly,
            detail: None,
        }
    }

    pub fn semantics(mut self, s: impl ToString) -> Self {
        self.semantics = Some(s.to_string());
        self
    }

    pub fn mass_term(mut self, s: impl ToString) -> Self {
        self.mass_term = Some(s.to_string());
        self
    }

    pub fn convention(mut self, s: impl ToString) -> Self {
        self.convention = Some(s.to_string());
        self
    }

    pub fn dim(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn mesh(mut self, h: f64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn mass(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn on_box(mut self, lo: &[i64], hi: &[i64]) -> Self {
        self.r#box = Some((lo.to_vec(), hi.to_vec()));
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    /// Excluded from determinism comparisons.
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, config: serde_json::Value) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            config,
            checks: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    /// True when no pass-class check failed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_tolerance() {
        let a = Anchor::new("t", "x = x");
        assert_eq!(
            Check::pass_class("a", a.clone(), 1e-13, 1e-12).status,
            Status::Pass
        );
        assert_eq!(
            Check::pass_class("a", a.clone(), 1e-12, 1e-12).status,
            Status::Fail
        );
        assert_eq!(
            Check::pass_class("a", a.clone(), f64::NAN, 1.0).status,
            Status::Fail
        );
        assert!(Check::report_only("a", a.clone(), 5.0).passed());
        assert_eq!(Check::verdict("a", a, false).status, Status::Fail);
    }

    #[test]
    fn json_shape() {
        let mut r = VerificationReport::new("demo", serde_json::json!({"seed": 7}));
        r.checks.push(
            Check::report_only("c", Anchor::new("topic", "A = B"), 0.25)
                .semantics("s1")
                .on_box(&[0], &[3]),
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"][0]["status"], "report-only");
        assert_eq!(v["checks"][0]["box"], serde_json::json!([[0], [3]]));
        assert_eq!(v["checks"][0]["anchor"]["claim"], "A = B");
        assert!(v["checks"][0].get("tolerance").is_none());
    }
}
