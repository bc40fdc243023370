//! CSV tables and flat JSON objects. Numbers carry 17 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where the scalar block goes in CSV mode. Defaults to OUT.json when
    /// --out is given, standard error otherwise.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn csv_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub enum Value {
    Num(f64),
    Int(u64),
    Str(String),
    Bool(bool),
    Null,
    Nums(Vec<f64>),
    Strs(Vec<String>),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Num(x) => num(*x),
            Value::Int(n) => n.to_string(),
            Value::Str(s) => serde_json::to_string(s).expect("string serializes"),
            Value::Bool(b) => b.to_string(),
            Value::Null => "null".into(),
            Value::Nums(v) => format!("[{}]", v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ")),
            Value::Strs(v) => format!(
                "[{}]",
                v.iter().map(|s| serde_json::to_string(s).expect("string serializes")).collect::<Vec<_>>().join(", ")
            ),
        }
    }
}

/// Insertion-ordered flat JSON object.
#[derive(Default)]
pub struct JsonObject(Vec<(String, Value)>);

impl JsonObject {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, v: Value) -> &mut Self {
        self.0.push((key.to_string(), v));
        self
    }

    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.set(key, Value::Num(x))
    }

    pub fn str(&mut self, key: &str, s: &str) -> &mut Self {
        self.set(key, Value::Str(s.to_string()))
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self.0.iter().map(|(k, v)| format!("  \"{k}\": {}", v.render())).collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

fn csv_text(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

/// Column-major table with lowercase headers.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self) -> String {
        let mut s = self.headers.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => csv_num(*x),
                    Cell::Int(n) => n.to_string(),
                    Cell::Text(t) => csv_text(t),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Table columns as JSON arrays, keyed by header.
    pub fn into_json(self, obj: &mut JsonObject) {
        for (k, h) in self.headers.iter().enumerate() {
            let col: Vec<&Cell> = self.rows.iter().map(|r| &r[k]).collect();
            let v = if col.iter().all(|c| !matches!(c, Cell::Text(_))) {
                Value::Nums(
                    col.iter()
                        .map(|c| match c {
                            Cell::Num(x) => *x,
                            Cell::Int(n) => *n as f64,
                            Cell::Text(_) => unreachable!(),
                        })
                        .collect(),
                )
            } else {
                Value::Strs(
                    col.iter()
                        .map(|c| match c {
                            Cell::Num(x) => num(*x),
                            Cell::Int(n) => n.to_string(),
                            Cell::Text(t) => t.clone(),
                        })
                        .collect(),
                )
            };
            obj.set(h, v);
        }
    }
}

fn write_to(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// Emit a table plus a scalar block in the requested format.
pub fn emit(args: &OutputArgs, table: Table, scalars: JsonObject) -> io::Result<()> {
    match args.format {
        Format::Json => {
            let mut obj = scalars;
            table.into_json(&mut obj);
            write_to(args.out.as_deref(), &obj.render())
        }
        Format::Csv => {
            write_to(args.out.as_deref(), &table.render())?;
            let side = args.sidecar.clone().or_else(|| args.out.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".json");
                PathBuf::from(s)
            }));
            match side {
                Some(p) => fs::write(p, scalars.render()),
                None => io::stderr().lock().write_all(scalars.render().as_bytes()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), "null");
        assert_eq!(csv_num(f64::INFINITY), "inf");
        assert_eq!(csv_text("a,b"), "\"a,b\"");
        assert_eq!(csv_text("ab"), "ab");
    }

    #[test]
    fn json_is_valid() {
        let mut o = JsonObject::new();
        o.num("x", 1.5).str("s", "a\"b").set("v", Value::Nums(vec![1.0, 2.0])).set("n", Value::Null);
        let parsed: serde_json::Value = serde_json::from_str(&o.render()).unwrap();
        assert_eq!(parsed["x"], 1.5);
        assert_eq!(parsed["s"], "a\"b");
        assert_eq!(parsed["v"][1], 2.0);
    }
}
