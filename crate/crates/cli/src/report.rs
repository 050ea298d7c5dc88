//! Command results as JSON documents or CSV tables.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "torus-spectra/1";

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i128),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Float(v) => format!("{v:.16e}"),
            Self::Int(v) => v.to_string(),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Self::Int(v as i128)
            }
        }
    )*};
}
int_cell!(i64, u64, usize, i128, u32);

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

/// The result of one command: a JSON payload plus a CSV view of it.
pub struct Report {
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new<T: Serialize>(result: &T) -> Self {
        Self { result: serde_json::to_value(result).expect("results serialize"), header: Vec::new(), rows: Vec::new() }
    }

    /// A single-row table.
    pub fn row(mut self, fields: Vec<(&'static str, Cell)>) -> Self {
        let (header, row) = fields.into_iter().unzip();
        self.header = header;
        self.rows = vec![row];
        self
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn write_json<W: Write>(&self, out: W, command: &str, config: &Value) -> io::Result<()> {
        let doc = json!({ "schema": SCHEMA, "command": command, "config": config, "result": self.result });
        write_json_line(out, &doc)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

pub fn write_json_line<W: Write>(mut out: W, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)
}
