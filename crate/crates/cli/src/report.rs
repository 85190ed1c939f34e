//! Report rows and their CSV / JSON-lines serialization.

use std::io::Write;

use serde::Serialize;

use crate::error::CliError;

/// Column order of the CSV report.
pub const COLUMNS: [&str; 9] = [
    "scenario",
    "check",
    "objects",
    "passed",
    "worst_value",
    "worst_index",
    "tol",
    "cap",
    "elapsed_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub scenario: String,
    pub check: String,
    /// Object names joined with `;`.
    pub objects: String,
    pub passed: bool,
    pub worst_value: f64,
    pub worst_index: Option<i64>,
    pub tol: f64,
    pub cap: usize,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(format!("unknown format {s} (expected csv or jsonl)")),
        }
    }
}

/// Seventeen significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl ReportRow {
    fn fields(&self) -> [String; 9] {
        [
            self.scenario.clone(),
            self.check.clone(),
            self.objects.clone(),
            self.passed.to_string(),
            fmt_float(self.worst_value),
            self.worst_index.map(|k| k.to_string()).unwrap_or_default(),
            fmt_float(self.tol),
            self.cap.to_string(),
            self.elapsed_ms.to_string(),
        ]
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ReportRow], format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(COLUMNS).map_err(csv_err)?;
            for r in rows {
                w.write_record(r.fields()).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = out;
            for r in rows {
                // Non-finite floats are not valid JSON, so floats go out as
                // the same strings the CSV uses.
                let f = r.fields();
                let obj = serde_json::json!({
                    "scenario": r.scenario,
                    "check": r.check,
                    "objects": r.objects,
                    "passed": r.passed,
                    "worst_value": f[4],
                    "worst_index": r.worst_index,
                    "tol": f[6],
                    "cap": r.cap,
                    "elapsed_ms": r.elapsed_ms,
                });
                writeln!(out, "{obj}")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
