//! CSV and JSON rendering. Both are locale-free and deterministic; JSON
//! numbers are always plain decimal literals.

use serde::Serialize;
use serde_json::Value;

use crate::config::CliError;

/// CSV text made of one or more blocks, each a header plus rows, separated
/// by an empty line.
pub struct Csv {
    done: String,
    block: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Self { done: String::new(), block: csv::Writer::from_writer(Vec::new()) };
        c.line(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn line(&mut self, cells: impl IntoIterator<Item = String>) {
        self.block.write_record(cells.into_iter().collect::<Vec<_>>()).expect("in-memory write");
    }

    pub fn section(&mut self, header: &[&str]) {
        let block = std::mem::replace(&mut self.block, csv::Writer::from_writer(Vec::new()));
        self.done.push_str(&into_text(block));
        self.done.push('\n');
        self.line(header.iter().map(|s| s.to_string()));
    }

    pub fn finish(mut self) -> String {
        self.done.push_str(&into_text(self.block));
        self.done
    }
}

fn into_text(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut out = String::new();
    write_value(&value, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, depth: usize, out: &mut String) -> Result<(), CliError> {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&f.to_string()),
            _ => return Err(CliError::Numerical(format!("non-finite number {n}"))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return Ok(());
            }
            let scalar = items.iter().all(|x| !x.is_array() && !x.is_object());
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if scalar {
                    if i > 0 {
                        out.push(' ');
                    }
                } else {
                    out.push('\n');
                    out.push_str(&pad(depth + 1));
                }
                write_value(x, depth + 1, out)?;
            }
            if !scalar {
                out.push('\n');
                out.push_str(&pad(depth));
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return Ok(());
            }
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push_str(": ");
                write_value(x, depth + 1, out)?;
            }
            out.push('\n');
            out.push_str(&pad(depth));
            out.push('}');
        }
    }
    Ok(())
}
