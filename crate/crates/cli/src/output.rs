use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Add `"schema": 1` to an object, or wrap anything else as `rows`.
pub fn with_schema<T: Serialize>(value: &T) -> Value {
    let v = serde_json::to_value(value).expect("plain data serializes");
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if k != "schema" {
                    out.insert(k, x);
                }
            }
        }
        other => {
            out.insert("rows".into(), other);
        }
    }
    Value::Object(out)
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(&with_schema(value)).expect("json");
    s.push(b'\n');
    s
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

/// Write everything at once so a failure never leaves partial output.
pub fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, bytes),
        None => {
            let mut lock = io::stdout().lock();
            lock.write_all(bytes)?;
            lock.flush()
        }
    }
}
