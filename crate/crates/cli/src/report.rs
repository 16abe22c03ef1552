//! Command output in text, CSV and JSON form.

use std::io::Write;

use clap::ValueEnum;
use hurwitz_core::MpComplex;
use rug::Float;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Process exit status shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    Accuracy = 2,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    /// A decimal string.
    Real(String),
    Complex { re: String, im: String },
    Bool(bool),
    Int(u64),
    Empty,
}

/// Decimal string with `digits` significant digits, ties to even.
pub fn fmt_real(x: &Float, digits: u32) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x.is_sign_negative() { "-inf".into() } else { "inf".into() }
    } else if x.is_zero() {
        "0".into()
    } else {
        x.to_string_radix(10, Some(digits.max(1) as usize))
    }
}

/// Error estimates are printed with three digits.
pub fn err_cell(x: &Float) -> Cell {
    Cell::Real(fmt_real(x, 3))
}

pub fn real_cell(x: &Float, digits: u32) -> Cell {
    Cell::Real(fmt_real(x, digits))
}

pub fn complex_cell(z: &MpComplex, digits: u32) -> Cell {
    Cell::Complex {
        re: fmt_real(&z.re, digits),
        im: fmt_real(&z.im, digits),
    }
}

fn text_complex(re: &str, im: &str) -> String {
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Real(s) => s.clone(),
            Cell::Complex { re, im } => text_complex(re, im),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) | Cell::Real(s) => Value::String(s.clone()),
            Cell::Complex { re, im } => {
                let mut m = Map::new();
                m.insert("re".into(), Value::String(re.clone()));
                m.insert("im".into(), Value::String(im.clone()));
                Value::Object(m)
            }
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Int(n) => Value::from(*n),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub errors: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            columns,
            rows: Vec::new(),
            errors: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Records an error; the worst status wins.
    pub fn fail(&mut self, status: Status, msg: impl Into<String>) {
        self.errors.push(msg.into());
        if status as i32 > self.status as i32 {
            self.status = status;
        }
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.into()));
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        root.insert("inputs".into(), Value::Object(inputs));
        let results = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        root.insert("results".into(), Value::Array(results));
        root.insert(
            "errors".into(),
            Value::Array(self.errors.iter().map(|e| Value::String(e.clone())).collect()),
        );
        root.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
        Value::Object(root)
    }

    /// Complex columns are split into `_re` and `_im` columns.
    fn csv_layout(&self) -> Vec<bool> {
        self.columns
            .iter()
            .enumerate()
            .map(|(i, _)| self.rows.iter().any(|r| matches!(r[i], Cell::Complex { .. })))
            .collect()
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let split = self.csv_layout();
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::new();
        for (c, &sp) in self.columns.iter().zip(&split) {
            if sp {
                header.push(format!("{c}_re"));
                header.push(format!("{c}_im"));
            } else {
                header.push(c.to_string());
            }
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = Vec::new();
            for (cell, &sp) in row.iter().zip(&split) {
                match (cell, sp) {
                    (Cell::Complex { re, im }, _) => {
                        rec.push(re.clone());
                        rec.push(im.clone());
                    }
                    (other, true) => {
                        rec.push(other.text());
                        rec.push(String::new());
                    }
                    (other, false) => rec.push(other.text()),
                }
            }
            w.write_record(&rec)?;
        }
        w.flush()
    }

    fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        if self.rows.is_empty() {
            return Ok(());
        }
        if self.rows.len() == 1 {
            let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            for (c, v) in self.columns.iter().zip(&self.rows[0]) {
                if !matches!(v, Cell::Empty) {
                    writeln!(out, "{c:<width$}  {}", v.text())?;
                }
            }
            return Ok(());
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| -> String {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for r in &cells {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }

    /// Writes the report to stdout; text and CSV errors go to stderr.
    pub fn emit(&self, format: Format) -> std::io::Result<()> {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.to_json()).map_err(std::io::Error::other)?;
                writeln!(out, "{text}")?;
            }
            Format::Csv => self.write_csv(&mut out)?,
            Format::Text => self.write_text(&mut out)?,
        }
        if format != Format::Json {
            for e in &self.errors {
                eprintln!("error: {e}");
            }
        }
        Ok(())
    }
}
