//! Report serialization. JSON carries the full report; CSV has one row per check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Format;
use crate::suite::{CheckReport, SuiteReport};

pub const CSV_COLUMNS: [&str; 16] = [
    "kind",
    "id",
    "alpha",
    "beta",
    "x",
    "y",
    "nu",
    "lhs",
    "rhs",
    "anomalous",
    "abs_residual",
    "rel_residual",
    "quadrature_error",
    "fitted_rate",
    "status",
    "outcome",
];

/// One parsed CSV row. Empty cells read back as `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub kind: String,
    pub id: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub nu: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub anomalous: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub quadrature_error: Option<f64>,
    pub fitted_rate: Option<f64>,
    pub status: String,
    pub outcome: String,
}

/// 17 significant digits; `NaN`, `inf`, `-inf` for non-finite values.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn status_name<T: Serialize>(s: &T) -> String {
    match serde_json::to_value(s) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn csv_record(check: &CheckReport) -> Vec<String> {
    match check {
        CheckReport::Identity { outcome, report, .. } => {
            let p = &report.params;
            vec![
                "identity".into(),
                report.identity_id.to_string(),
                format_number(p.alpha.value()),
                cell(p.beta.map(|b| b.value())),
                format_number(p.x),
                cell(p.y),
                cell(p.nu.map(|n| n.value())),
                format_number(report.lhs),
                format_number(report.rhs),
                format_number(report.anomalous),
                format_number(report.abs_residual),
                format_number(report.rel_residual),
                format_number(report.quadrature_error),
                String::new(),
                report.status.as_str().into(),
                outcome.as_str().into(),
            ]
        }
        CheckReport::Convergence { outcome, spec, table, .. } => {
            // Parameters that exist on the target; others stay blank.
            let target = serde_json::to_value(spec.target).unwrap_or(Value::Null);
            let param = |k: &str| cell(target.get(k).and_then(Value::as_f64));
            let last = table.as_ref().and_then(|t| t.entries.last());
            let rel = last.map(|e| {
                let scale = e.finite_value.abs().max(e.limit_value.abs());
                if scale > 0.0 {
                    e.abs_error / scale
                } else {
                    e.abs_error
                }
            });
            vec![
                "convergence".into(),
                spec.target.name().into(),
                param("alpha"),
                param("beta"),
                param("x"),
                param("y"),
                param("nu"),
                cell(last.map(|e| e.finite_value)),
                cell(last.map(|e| e.limit_value)),
                String::new(),
                cell(last.map(|e| e.abs_error)),
                cell(rel),
                String::new(),
                cell(table.as_ref().map(|t| t.fitted_rate)),
                table.as_ref().map(|t| status_name(&t.fit_status)).unwrap_or_else(|| "error".into()),
                outcome.as_str().into(),
            ]
        }
    }
}

pub fn to_csv(report: &SuiteReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing to memory cannot fail.
    w.write_record(CSV_COLUMNS).expect("in-memory csv");
    for c in &report.checks {
        w.write_record(csv_record(c)).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn to_json(report: &SuiteReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn emit_report(report: &SuiteReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report).into_bytes(),
        Format::Csv => to_csv(report).into_bytes(),
    }
}

pub fn parse_json(text: &str) -> serde_json::Result<SuiteReport> {
    serde_json::from_str(text)
}

pub fn parse_csv(text: &str) -> csv::Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, f64::MAX] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        assert!(format_number(f64::NAN).parse::<f64>().unwrap().is_nan());
        assert_eq!(format_number(f64::NEG_INFINITY).parse::<f64>().unwrap(), f64::NEG_INFINITY);
    }
}
