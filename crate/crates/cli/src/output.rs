use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::CliError;

/// Bumped whenever a column is renamed, removed or reordered.
pub const SCHEMA_VERSION: &str = "1";

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|source| CliError::Io(eee_core::Error::Io { path: p.to_owned(), source }))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a header and rows; `schema_version` is prepended to both.
pub fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(open(path)?);
    w.write_record(std::iter::once("schema_version").chain(header.iter().copied()))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        w.write_record(std::iter::once(SCHEMA_VERSION).chain(row.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn num(v: f64) -> String {
    v.to_string()
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Seconds, shortened for reports: 0.0002 → "200us".
pub fn human_secs(secs: f64) -> String {
    let (v, unit) = match secs.abs() {
        0.0 => return "0s".into(),
        s if s >= 1.0 => (secs, "s"),
        s if s >= 1e-3 => (secs * 1e3, "ms"),
        s if s >= 1e-6 => (secs * 1e6, "us"),
        _ => (secs * 1e9, "ns"),
    };
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}{unit}")
}
