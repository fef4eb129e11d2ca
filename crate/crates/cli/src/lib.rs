//! Argument parsers shared by the `qcluster` binary and its fuzz targets.

use qcluster::intlin::IntMatrix;

/// Splits tokens on commas and whitespace into 0-based mutation indices.
pub fn parse_sequence<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<usize>, String> {
    tokens
        .iter()
        .flat_map(|t| t.as_ref().split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(format!("`{t}` is not a 1-based index")),
        })
        .collect()
}

/// Reads a square integer matrix written as `a,b;c,d`.
pub fn parse_lambda(text: &str) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()
        .map_err(|e| format!("--lambda: {e}"))?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err("--lambda must be square".into());
    }
    Ok(IntMatrix::from_rows(&rows))
}
