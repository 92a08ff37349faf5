use serde::Serialize;

use crate::error::{CliError, CliResult};

/// A finished report and whether every checked property held.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn json_text<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Report(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn csv_text<T: Serialize>(rows: impl IntoIterator<Item = T>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Report(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Report(e.to_string()))
}
