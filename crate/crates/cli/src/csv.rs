//! Deterministic CSV tables: reals with 17 significant digits, metadata in
//! trailing `#` comment lines.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// `{:.16e}`: one leading digit plus sixteen decimals.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(v) => write!(out, "{v}").expect("writing to a String"),
            Cell::Real(v) => out.push_str(&real(*v)),
            Cell::Text(s) => out.push_str(s),
            Cell::Empty => {}
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Comment lines, written without the leading `# `.
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.footer.push(line.into());
    }

    pub fn render(&self) -> Result<String, CliError> {
        if self.rows.is_empty() {
            return Err(CliError::EmptyTable);
        }
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        for line in &self.footer {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<(), CliError> {
    let text = table.render()?;
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
