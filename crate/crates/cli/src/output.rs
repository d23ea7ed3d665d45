//! Rendering of command results as JSON, CSV or an aligned table.

use std::io::{self, IsTerminal, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A result ready to print: `json` holds one document per output line,
/// `header` and `rows` feed the CSV and table forms.
#[derive(Debug, Default)]
pub struct Report {
    pub json: Vec<Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report { json: Vec::new(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn is_empty(&self) -> bool {
        self.json.is_empty() && self.rows.is_empty()
    }

    /// Writes nothing at all for an empty report.
    pub fn render(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        match format {
            Format::Json => {
                for doc in &self.json {
                    writeln!(out, "{doc}")?;
                }
            }
            Format::Csv => {
                if !self.header.is_empty() {
                    writeln!(out, "{}", self.header.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
                }
                for row in &self.rows {
                    writeln!(out, "{}", row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
                }
            }
            Format::Table => self.render_table(out)?,
        }
        Ok(())
    }

    fn render_table(&self, out: &mut dyn Write) -> io::Result<()> {
        let columns = self.header.len().max(self.rows.iter().map(Vec::len).max().unwrap_or(0));
        let mut widths = vec![0usize; columns];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line =
            |row: &[String]| row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string();
        if !self.header.is_empty() {
            let head = line(&self.header);
            if use_color() {
                writeln!(out, "\x1b[1m{head}\x1b[0m")?;
            } else {
                writeln!(out, "{head}")?;
            }
        }
        for row in &self.rows {
            writeln!(out, "{}", line(row))?;
        }
        Ok(())
    }
}

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal()
}

fn csv_field(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(&["x", "value"]);
        r.row(vec!["1".into(), "1/5".into()]);
        r.row(vec!["10".into(), "3/8*L + 1/8*U".into()]);
        r.json.push(serde_json::json!({"values": ["1/5"]}));
        r
    }

    fn render(format: Format) -> String {
        let mut buf = Vec::new();
        sample().render(format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        assert_eq!(render(Format::Csv), "x,value\n1,1/5\n10,3/8*L + 1/8*U\n");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn table_aligns() {
        assert_eq!(render(Format::Table), "x   value\n1   1/5\n10  3/8*L + 1/8*U\n");
    }

    #[test]
    fn empty_is_silent() {
        let mut buf = Vec::new();
        Report::new(&["x"]).render(Format::Table, &mut buf).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn json_lines() {
        assert_eq!(render(Format::Json), "{\"values\":[\"1/5\"]}\n");
    }
}
