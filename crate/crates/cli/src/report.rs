//! JSON rendering of verification reports with a stable key order.

use rnwave_core::analysis::VerificationReport;
use serde::Serialize;

#[derive(Serialize)]
struct ReportJson<'a> {
    checks: Vec<CheckJson<'a>>,
    all_passed: bool,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    measured: Option<f64>,
    target: &'a str,
    details: &'a str,
}

/// Serializes with struct-declared field order; identical reports produce
/// identical bytes.
pub fn to_json(report: &VerificationReport) -> String {
    let body = ReportJson {
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: &c.name,
                status: c.status.as_str(),
                measured: c.measured,
                target: &c.target,
                details: &c.details,
            })
            .collect(),
        all_passed: report.all_passed(),
    };
    let mut text = serde_json::to_string_pretty(&body).expect("report serialization");
    text.push('\n');
    text
}
