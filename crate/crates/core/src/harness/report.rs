use std::str::FromStr;

use thiserror::Error;

use super::fuzz::{FuzzReport, SCHEMA};

pub const CSV_COLUMNS: [&str; 12] = [
    "bound_id", "trial", "n", "s", "k", "abs_z0", "abs_polar", "alpha", "lhs", "rhs_min", "margin", "outcome",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn emit_report(report: &FuzzReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports contain only finite numbers and strings");
            out.push(b'\n');
            out
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("writing to memory");
            for r in report.sections.iter().flat_map(|s| &s.records) {
                w.write_record([
                    r.bound_id.as_str().to_string(),
                    r.trial.to_string(),
                    r.n.to_string(),
                    r.s.to_string(),
                    num(r.k),
                    num(r.abs_z0),
                    opt(r.abs_polar),
                    num(r.alpha),
                    opt(r.lhs),
                    opt(r.rhs_min),
                    opt(r.margin),
                    r.outcome.clone(),
                ])
                .expect("writing to memory");
            }
            w.into_inner().expect("writing to memory")
        }
    }
}

/// Reads a JSON report back.
pub fn parse_report(bytes: &[u8]) -> Result<FuzzReport, ReportError> {
    let report: FuzzReport = serde_json::from_slice(bytes)?;
    if report.schema != SCHEMA {
        return Err(ReportError::Schema(report.schema));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundId;
    use crate::harness::{run_fuzz, FuzzConfig};

    #[test]
    fn empty_report_is_valid_json() {
        let report = FuzzReport::empty(FuzzConfig {
            bounds: vec![BoundId::Bernstein],
            ..Default::default()
        });
        let bytes = emit_report(&report, ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["sections"][0]["records"].as_array().unwrap().len(), 0);
        assert_eq!(v["sections"][0]["violation_instances"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn three_trials_give_three_rows() {
        let cfg = FuzzConfig {
            bounds: vec![BoundId::PolarSpecialInside],
            trials: 3,
            degree_max: 5,
            ..Default::default()
        };
        let csv = String::from_utf8(emit_report(&run_fuzz(&cfg).unwrap(), ReportFormat::Csv)).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        let row: Vec<_> = lines[1].split(',').collect();
        assert_eq!(row.len(), 12);
        let margin: f64 = row[10].parse().unwrap();
        assert!(margin.is_finite());
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let cfg = FuzzConfig {
            trials: 2,
            degree_max: 6,
            seed: 9,
            ..Default::default()
        };
        let first = emit_report(&run_fuzz(&cfg).unwrap(), ReportFormat::Json);
        let second = emit_report(&parse_report(&first).unwrap(), ReportFormat::Json);
        assert_eq!(first, second);
    }

    #[test]
    fn schema_is_checked() {
        let report = FuzzReport::empty(FuzzConfig::default());
        let text = String::from_utf8(emit_report(&report, ReportFormat::Json)).unwrap().replace(SCHEMA, "other/2");
        assert!(matches!(parse_report(text.as_bytes()), Err(ReportError::Schema(_))));
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
