use std::path::Path;

use crate::error::{io_error, CliError};

/// Reads one number per row. A non-numeric first row is taken as a header;
/// blank rows are skipped.
pub fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_column(&text).map_err(|m| CliError::Input(format!("{}: {m}", path.display())))
}

pub fn parse_column(text: &str) -> Result<Vec<f64>, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut seen_row = false;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let fields: Vec<&str> = record.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        if fields.len() > 1 {
            return Err(format!("line {line}: expected one column, found {}", fields.len()));
        }
        let first_row = !seen_row;
        seen_row = true;
        match fields[0].parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => return Err(format!("line {line}: non-finite value {v}")),
            Err(_) if first_row => continue,
            Err(_) => return Err(format!("line {line}: `{}` is not a number", fields[0])),
        }
    }
    if values.is_empty() {
        return Err("no observations".to_string());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_blank_lines() {
        assert_eq!(parse_column("bac\n0.1\n\n0.2\n").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_column("0.5\n1e-1\n").unwrap(), vec![0.5, 0.1]);
    }

    #[test]
    fn malformed_rows() {
        assert!(parse_column("").unwrap_err().contains("no observations"));
        assert!(parse_column("x\n").unwrap_err().contains("no observations"));
        assert!(parse_column("0.1\nabc\n").unwrap_err().contains("line 2"));
        assert!(parse_column("0.1,0.2\n").is_err());
        assert!(parse_column("0.1\ninf\n").is_err());
    }
}
