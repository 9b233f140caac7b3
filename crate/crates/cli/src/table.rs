//! Result tables and their CSV form.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Shortest round-trip decimal. Plain notation for magnitudes in
/// `[1e-4, 1e15)`, scientific otherwise.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    /// The first `inputs` columns determine the rest of the row.
    pub inputs: usize,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn check_shape(&self) -> Result<(), CliError> {
        if let Some((i, r)) = self
            .rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != self.columns.len())
        {
            return Err(CliError::Numerical(format!(
                "table {}: row {i} has {} values for {} columns",
                self.name,
                r.len(),
                self.columns.len()
            )));
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        self.check_shape()?;
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut out = BufWriter::new(File::create(path).map_err(io)?);
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_f64(*x)))
                .map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }
}

/// A CSV file read back as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvFile {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_csv(path: &Path) -> Result<CsvFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let metadata = text
        .lines()
        .map_while(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let columns = r
        .headers()
        .map_err(bad)?
        .iter()
        .map(str::to_owned)
        .collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_owned).collect()))
        .collect::<Result<_, _>>()
        .map_err(bad)?;
    Ok(CsvFile {
        metadata,
        columns,
        rows,
    })
}
