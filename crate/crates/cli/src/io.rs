//! File formats: regression CSV input, atomic output, number rendering.

use bfcons_core::Dataset;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Renders a float so that it parses back to the same bits. Infinities are
/// written as `inf` / `-inf`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:?}")
    }
}

/// JSON value for a float: a number when finite, otherwise the string
/// `"inf"`, `"-inf"` or `"nan"`.
pub fn json_num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::Value::from(x)
    } else {
        serde_json::Value::from(fmt_num(x))
    }
}

/// Reads a regression CSV: comma separated, first column the response, the
/// rest regressors, no intercept column. A first row that does not parse as
/// numbers is taken as a header.
pub fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => rows.push(values),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(CliError::Input(format!(
                    "{}: line {}: {e}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    let Some(first) = rows.first() else {
        return Err(CliError::Input(format!("{}: no data rows", path.display())));
    };
    let width = first.len();
    if width < 2 {
        return Err(CliError::Input(format!(
            "{}: need a response column and at least one regressor",
            path.display()
        )));
    }
    let n = rows.len();
    let p = width - 1;
    let mut y = Vec::with_capacity(n);
    let mut x = vec![0.0; n * p];
    for (i, row) in rows.iter().enumerate() {
        y.push(row[0]);
        for j in 0..p {
            x[j * n + i] = row[j + 1];
        }
    }
    Ok(Dataset::from_column_major(y, x, p)?)
}

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
