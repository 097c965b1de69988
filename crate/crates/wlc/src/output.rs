//! Atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Writes `bytes` to `dir/name` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(&target)
        .map_err(|e| CliError::io(&target, e.error))?;
    Ok(target)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    write_atomic(dir, name, s.as_bytes())
}

/// Shortest decimal that round-trips.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &[String],
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err =
        |e: csv::Error| CliError::io(dir.join(name), std::io::Error::other(e.to_string()));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::io(dir.join(name), std::io::Error::other(e.to_string())))?;
    write_atomic(dir, name, &bytes)
}
