//! Schema-tagged numeric tables and their CSV/JSON encodings.
//!
//! CSV: header of `name[unit]` tokens, values in scientific notation with
//! nine significant digits. JSON: an array of objects keyed by column name.
//! Rows that would carry NaN or ±∞ are dropped and counted; a non-zero count
//! is written as a trailing `# dropped_rows,<n>` line (CSV) or a final
//! `{"dropped_rows": n}` object (JSON).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_owned(),
            unit: unit.to_owned(),
        }
    }

    pub fn header_token(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }

    fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        let open = token
            .find('[')
            .filter(|_| token.ends_with(']'))
            .ok_or_else(|| Error::Table(format!("header token `{token}` is not name[unit]")))?;
        Ok(Self::new(&token[..open], &token[open + 1..token.len() - 1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub schema_name: String,
    pub columns: Vec<Column>,
    rows: Vec<Vec<f64>>,
    dropped: usize,
}

impl SweepTable {
    pub fn new(schema_name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            schema_name: schema_name.to_owned(),
            columns: columns.iter().map(|(n, u)| Column::new(n, u)).collect(),
            rows: Vec::new(),
            dropped: 0,
        }
    }

    /// Appends a row. Wrong arity is an error; non-finite rows are dropped.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Table(format!(
                "{}: row has {} values, schema declares {}",
                self.schema_name,
                row.len(),
                self.columns.len()
            )));
        }
        if row.iter().all(|v| v.is_finite()) {
            self.rows.push(row);
        } else {
            self.dropped += 1;
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of one column, by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// `{:.8e}`: nine significant digits, e.g. `1.11053000e1`.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

pub fn write_table(table: &SweepTable, path: &Path, format: Format) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    match format {
        Format::Csv => {
            let file = File::create(path).map_err(io_err)?;
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(file);
            let csv_err = |source| Error::Csv {
                path: path.to_owned(),
                source,
            };
            w.write_record(table.columns.iter().map(Column::header_token))
                .map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|v| format_value(*v)))
                    .map_err(csv_err)?;
            }
            w.flush().map_err(io_err)?;
            if table.dropped > 0 {
                let mut file = w.into_inner().map_err(|e| io_err(e.into_error()))?;
                writeln!(file, "# dropped_rows,{}", table.dropped).map_err(io_err)?;
            }
            Ok(())
        }
        Format::Json => {
            let mut records: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| {
                            // re-parse the 9-digit text so both encodings carry the same value
                            let rounded: f64 = format_value(*v).parse().expect("formatted float");
                            (c.name.clone(), Value::from(rounded))
                        })
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            if table.dropped > 0 {
                records.push(serde_json::json!({ "dropped_rows": table.dropped }));
            }
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            serde_json::to_writer_pretty(&mut w, &records).map_err(|source| Error::Json {
                path: path.to_owned(),
                source,
            })?;
            writeln!(w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
    }
}

/// Reads a CSV table written by [`write_table`]. The schema name is the file stem.
pub fn read_csv_table(path: &Path) -> Result<SweepTable> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let schema_name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_owned();
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(io_err)?
        .ok_or_else(|| Error::Table(format!("{}: empty file", path.display())))?;
    let columns = header
        .split(',')
        .map(Column::parse)
        .collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable {
        schema_name,
        columns,
        rows: Vec::new(),
        dropped: 0,
    };
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(io_err)?;
        if let Some(rest) = line.strip_prefix("# dropped_rows,") {
            table.dropped = rest
                .trim()
                .parse()
                .map_err(|_| Error::Table(format!("bad footer `{line}`")))?;
            continue;
        }
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Table(format!("{}:{}: {e}", path.display(), lineno + 2)))?;
        if row.len() != table.columns.len() {
            return Err(Error::Table(format!(
                "{}:{}: expected {} values, found {}",
                path.display(),
                lineno + 2,
                table.columns.len(),
                row.len()
            )));
        }
        table.rows.push(row);
    }
    Ok(table)
}
