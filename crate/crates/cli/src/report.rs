use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use heisenberg_hodge::verify::{Check, Suite};
use serde::Serialize;

use crate::config::Format;

/// One row of a `verify` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub check: String,
    pub anchor: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall time of the whole suite; absent unless `--timings` is given, so
    /// that reports are reproducible byte for byte.
    pub runtime_ms: Option<u64>,
}

impl SuiteReport {
    pub fn from_check(c: Check, runtime_ms: Option<u64>) -> Self {
        Self {
            suite: c.suite,
            check: c.check,
            anchor: c.anchor,
            max_error: c.max_error,
            tolerance: c.tolerance,
            pass: c.passed,
            runtime_ms,
        }
    }
}

/// Write JSON (pretty, newline-terminated) or CSV with a header row. Rows are
/// written in the order given.
pub fn emit_rows<T: Serialize>(rows: &[T], header: &[&str], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut *out);
            w.write_record(header)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Run `f` against the file at `path`, or stdout when there is none.
pub fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w).with_context(|| format!("writing {}", p.display()))?;
            w.flush().with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

pub const REPORT_HEADER: [&str; 7] = ["suite", "check", "anchor", "max_error", "tolerance", "pass", "runtime_ms"];

#[cfg(test)]
mod tests {
    use super::*;

    fn row(pass: bool) -> SuiteReport {
        SuiteReport {
            suite: Suite::Fan,
            check: "eigenpairs".into(),
            anchor: "fan-eigensystem".into(),
            max_error: 1.5e-11,
            tolerance: 1e-10,
            pass,
            runtime_ms: None,
        }
    }

    fn render(rows: &[SuiteReport], format: Format) -> String {
        let mut buf = Vec::new();
        emit_rows(rows, &REPORT_HEADER, format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_reports() {
        assert_eq!(render(&[], Format::Json), "[]\n");
        assert_eq!(render(&[], Format::Csv), "suite,check,anchor,max_error,tolerance,pass,runtime_ms\n");
    }

    #[test]
    fn csv_row_layout() {
        let s = render(&[row(true), row(false)], Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[1], "fan-eigen,eigenpairs,fan-eigensystem,1.5e-11,1e-10,true,");
        assert_eq!(lines[2], "fan-eigen,eigenpairs,fan-eigensystem,1.5e-11,1e-10,false,");
    }

    #[test]
    fn json_fields() {
        let v: serde_json::Value = serde_json::from_str(&render(&[row(true)], Format::Json)).unwrap();
        assert_eq!(v[0]["suite"], "fan-eigen");
        assert_eq!(v[0]["pass"], true);
        assert!(v[0]["runtime_ms"].is_null());
    }
}
