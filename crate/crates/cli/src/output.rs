//! Payload rendering and the exit-code contract.

use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use shatterlab::Error;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: a JSON object, optionally a CSV table or plain
/// lines, and whether a checked statement failed.
pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub lines: Option<Vec<String>>,
    /// Library-emitted artifact text, printed verbatim in JSON mode.
    pub raw: Option<String>,
    pub failed: bool,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn new(json: Value) -> Self {
        Outcome {
            json,
            csv: None,
            lines: None,
            raw: None,
            failed: false,
            diagnostics: vec![],
        }
    }

    /// An artifact (table, tree) whose text must round-trip exactly.
    pub fn artifact(text: String) -> Result<Self, Error> {
        let mut o = Outcome::new(serde_json::from_str(&text)?);
        o.raw = Some(text);
        Ok(o)
    }

    pub fn of<T: Serialize>(v: &T) -> Self {
        Outcome::new(serde_json::to_value(v).expect("reports serialize"))
    }

    pub fn failed_if(mut self, failed: bool, why: impl Into<String>) -> Self {
        if failed {
            self.failed = true;
            self.diagnostics.push(why.into());
        }
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

/// CSV from serializable rows, header included.
pub fn csv_table<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8")
}

/// `key,value` rows for a flat JSON object; nested values stay JSON text.
fn object_csv(value: &Value) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["key", "value"]).expect("in-memory writer");
    if let Value::Object(map) = value {
        for (k, v) in map {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record([k.as_str(), text.as_str()]).expect("in-memory writer");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8")
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TreeRankExceeded { .. } => 1,
        Error::Input(_) | Error::Json(_) => 2,
        Error::Resource { .. } => 3,
    }
}

pub fn finish(result: Result<Outcome, Error>, format: Format, quiet: bool) -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(o) => {
            let payload = match (&o.lines, format, &o.csv) {
                (Some(lines), _, _) => lines.iter().map(|l| format!("{l}\n")).collect(),
                (None, Format::Json, _) if o.raw.is_some() => format!("{}\n", o.raw.as_deref().unwrap_or_default()),
                (None, Format::Csv, Some(csv)) => csv.clone(),
                (None, Format::Csv, None) => object_csv(&o.json),
                (None, Format::Json, _) => format!("{}\n", o.json),
            };
            let _ = out.write_all(payload.as_bytes());
            if !quiet {
                for d in &o.diagnostics {
                    eprintln!("shatterlab: {d}");
                }
            }
            ExitCode::from(u8::from(o.failed))
        }
        Err(e) => {
            if let Error::TreeRankExceeded { t, tree } = &e {
                let v = serde_json::json!({ "tree_rank_exceeds": t, "tree": tree });
                let _ = writeln!(out, "{v}");
            }
            eprintln!("shatterlab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
