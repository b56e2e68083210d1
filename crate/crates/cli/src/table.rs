use std::io::Write;

use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Null,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Num(v) => format!("{v}"),
            Self::Text(s) => s.clone(),
            Self::Null => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Num(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Self::Null, Self::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A result table with an ordered metadata header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, mut out: W) -> CliResult<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> CliResult<()> {
        #[derive(Serialize)]
        struct Mirror<'a> {
            metadata: serde_json::Map<String, serde_json::Value>,
            columns: &'a [String],
            rows: &'a [Vec<Cell>],
        }
        let metadata = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        serde_json::to_writer_pretty(
            &mut out,
            &Mirror {
                metadata,
                columns: &self.columns,
                rows: &self.rows,
            },
        )?;
        writeln!(out)?;
        Ok(())
    }
}
