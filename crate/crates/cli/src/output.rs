//! Output envelope and formats.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// `sha256:<hex>` of some input bytes.
pub fn hash_bytes(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Every JSON output has this shape; `result` or `failure` is present.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub inputs: Map<String, Value>,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Value>,
}

impl Envelope {
    pub fn new(command: &'static str, seed: u64, params: Value) -> Envelope {
        Envelope { command, version: env!("CARGO_PKG_VERSION"), seed, inputs: Map::new(), params, result: None, failure: None }
    }

    pub fn input(mut self, name: &str, bytes: &[u8]) -> Envelope {
        self.inputs.insert(name.to_string(), Value::String(hash_bytes(bytes)));
        self
    }
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Renders the envelope; TSV has one `key<TAB>value` row per scalar leaf, with
/// arrays kept as compact JSON.
pub fn render(envelope: &Envelope, format: Format) -> String {
    let value = serde_json::to_value(envelope).expect("envelope serializes");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            rows.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
