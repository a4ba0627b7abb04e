use serde_json::Value;

use crate::args::ReportArgs;
use crate::io::{read_text, write_output, Failure};

/// Flatten scalar JSON fields into (dotted-path, rendered-value) rows.
/// Arrays are skipped; they do not tabulate usefully.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, v, rows);
            }
        }
        Value::Array(_) => {}
        Value::Null => {}
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => rows.push((prefix.to_string(), n.to_string())),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
    }
}

pub fn run(args: &ReportArgs) -> Result<i32, Failure> {
    let mut out = String::from("source,kind,argument,value\n");
    for path in &args.inputs {
        let text = read_text(path)?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            for (key, rendered) in rows {
                out.push_str(&format!("{path},{key},,{rendered}\n"));
            }
        } else {
            // CSV curve: pass cells through verbatim under a source column.
            for line in text.lines() {
                if line.is_empty() || line == "kind,argument,value" {
                    continue;
                }
                let mut fields = line.splitn(3, ',');
                let kind = fields.next().unwrap_or("");
                let argument = fields.next().unwrap_or("");
                let value = fields.next().unwrap_or("");
                out.push_str(&format!("{path},{kind},{argument},{value}\n"));
            }
        }
    }
    write_output(args.output.as_deref(), &out)?;
    Ok(0)
}
