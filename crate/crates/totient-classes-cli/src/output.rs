//! Record-oriented output: text, JSON lines, or CSV.
//!
//! Every command emits a stream of records followed by one summary record.
//! Stdout is byte-deterministic for identical invocations; anything
//! time-dependent goes to stderr.

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Val {
    U(u64),
    F(f64),
    S(String),
    List(Vec<String>),
}

impl Val {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Val::U(v) => serde_json::json!(v),
            Val::F(v) => serde_json::json!(v),
            Val::S(v) => serde_json::json!(v),
            Val::List(v) => serde_json::json!(v),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Val::U(v) => v.to_string(),
            Val::F(v) => format!("{v}"),
            Val::S(v) => v.clone(),
            Val::List(v) => v.join(";"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub kind: &'static str,
    pub fields: Vec<(&'static str, Val)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Record { kind, fields: Vec::new() }
    }

    pub fn field(mut self, name: &'static str, value: Val) -> Self {
        self.fields.push((name, value));
        self
    }
}

pub struct Printer {
    format: Format,
    csv_header: Option<(&'static str, Vec<&'static str>)>,
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Printer { format, csv_header: None }
    }

    pub fn emit(&mut self, record: &Record) {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        match self.format {
            Format::Text => {
                let body: Vec<String> = record
                    .fields
                    .iter()
                    .map(|(k, v)| format!("{k}={}", v.to_text()))
                    .collect();
                writeln!(out, "{} {}", record.kind, body.join(" ")).unwrap();
            }
            Format::Json => {
                let mut map = serde_json::Map::new();
                map.insert("schema".into(), serde_json::json!(1));
                map.insert("record".into(), serde_json::json!(record.kind));
                for (k, v) in &record.fields {
                    map.insert((*k).into(), v.to_json());
                }
                writeln!(out, "{}", serde_json::Value::Object(map)).unwrap();
            }
            Format::Csv => {
                let names: Vec<&'static str> = record.fields.iter().map(|(k, _)| *k).collect();
                if self.csv_header.as_ref().map(|(k, n)| (*k, n)) != Some((record.kind, &names)) {
                    writeln!(out, "record,{}", names.join(",")).unwrap();
                    self.csv_header = Some((record.kind, names));
                }
                let body: Vec<String> = record
                    .fields
                    .iter()
                    .map(|(_, v)| {
                        let s = v.to_text();
                        if s.contains(',') {
                            format!("\"{s}\"")
                        } else {
                            s
                        }
                    })
                    .collect();
                writeln!(out, "{},{}", record.kind, body.join(",")).unwrap();
            }
        }
    }
}
