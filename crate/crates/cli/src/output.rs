use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::EXIT_OK;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// The machine-readable result of one command.
///
/// Field order and number formatting are fixed, so serializing the same
/// inputs twice gives the same bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Self {
            tool: "gentrib".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

/// A command's output in every format plus its exit status.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub record: OutputRecord,
    pub human: String,
    pub csv: String,
    pub exit_code: u8,
}

impl Rendered {
    pub fn new(record: OutputRecord, human: String, csv: String) -> Self {
        Self {
            record,
            human,
            csv,
            exit_code: EXIT_OK,
        }
    }

    pub fn with_exit(mut self, code: u8) -> Self {
        self.exit_code = code;
        self
    }

    pub fn text(&self, format: Format) -> String {
        match format {
            Format::Human => self.human.clone(),
            Format::Json => self.record.to_json(),
            Format::Csv => self.csv.clone(),
        }
    }
}

/// `{"re": .., "im": ..}`.
pub fn complex_json(z: gentrib::Complex64) -> Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}

pub fn fmt_complex(z: gentrib::Complex64) -> String {
    if z.im < 0.0 {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}
