use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{format_value, Column, OutputError};
use crate::runner::TrajectoryPoint;

/// A parsed CSV file: header columns and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, column: Column) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|&c| c == column)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Writes the selected columns (all when empty) to any sink.
pub fn write_csv_to<W: Write>(
    points: &[TrajectoryPoint],
    columns: &[Column],
    sink: W,
    path: &Path,
) -> Result<(), OutputError> {
    if points.is_empty() {
        return Err(OutputError::EmptyRecords);
    }
    let columns = if columns.is_empty() { &Column::ALL[..] } else { columns };
    let wrap = |source| OutputError::Csv { path: path.to_path_buf(), source };
    let mut w = ::csv::Writer::from_writer(sink);
    w.write_record(columns.iter().map(|c| c.name())).map_err(wrap)?;
    for p in points {
        w.write_record(columns.iter().map(|c| format_value(c.value(p)))).map_err(wrap)?;
    }
    w.flush().map_err(|e| OutputError::io(path, e))
}

/// Writes (or overwrites) `path`.
pub fn write_csv(points: &[TrajectoryPoint], columns: &[Column], path: impl AsRef<Path>) -> Result<(), OutputError> {
    let path = path.as_ref();
    if points.is_empty() {
        return Err(OutputError::EmptyRecords);
    }
    let file = File::create(path).map_err(|e| OutputError::io(path, e))?;
    write_csv_to(points, columns, BufWriter::new(file), path)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<CsvTable, OutputError> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let wrap = |source| OutputError::Csv { path: path.clone(), source };
    let mut r = ::csv::Reader::from_path(&path).map_err(wrap)?;
    let columns = r.headers().map_err(wrap)?.iter().map(str::parse).collect::<Result<Vec<Column>, _>>()?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(wrap)?;
        let row = record
            .iter()
            .zip(&columns)
            .map(|(v, c)| {
                v.parse::<f64>().map_err(|_| OutputError::Parse {
                    path: path.clone(),
                    column: c.name().to_string(),
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(CsvTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::{evolve, RunConfig};

    #[test]
    fn single_row_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        let points = &evolve(&RunConfig::default().with_grid(0.01, 0.01)).unwrap()[..1];
        write_csv(points, &[], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let table = read_csv(&path).unwrap();
        assert_eq!(table.columns, Column::ALL);
        assert_eq!(table.column(Column::SzExpect).unwrap(), vec![0.0]);
    }

    #[test]
    fn overwrite_and_subset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub.csv");
        let points = evolve(&RunConfig::default().with_grid(1.0, 0.5)).unwrap();
        write_csv(&points, &[], &path).unwrap();
        write_csv(&points, &[Column::T, Column::ESx], &path).unwrap();
        let table = read_csv(&path).unwrap();
        assert_eq!(table.columns, vec![Column::T, Column::ESx]);
        assert_eq!(table.rows.len(), 3);
    }

    #[test]
    fn empty_and_missing() {
        assert!(matches!(write_csv(&[], &[], "unused.csv"), Err(OutputError::EmptyRecords)));
        let err = read_csv("/nonexistent/dir/x.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }
}
