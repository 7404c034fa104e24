use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "hdx-report/1";

pub struct Report {
    pub verb: &'static str,
    pub options: Value,
    pub input_sha256: Option<String>,
    pub aux_sha256: BTreeMap<String, String>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut header = Map::new();
        header.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        header.insert("input_sha256".into(), json!(self.input_sha256));
        if !self.aux_sha256.is_empty() {
            header.insert("aux_sha256".into(), json!(self.aux_sha256));
        }
        header.insert("options".into(), self.options.clone());
        json!({
            "schema": SCHEMA,
            "header": header,
            "verb": self.verb,
            "result": self.result,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    /// Header as `#` comment lines, then one `path<TAB>value` row per leaf of
    /// the result.
    pub fn render_tsv(&self) -> String {
        let doc = self.to_json();
        let mut out = format!("# schema\t{SCHEMA}\n# verb\t{}\n", self.verb);
        let mut rows = Vec::new();
        flatten("header", &doc["header"], &mut rows);
        for (k, v) in rows.drain(..) {
            out.push_str(&format!("# {k}\t{v}\n"));
        }
        out.push_str("path\tvalue\n");
        flatten("result", &doc["result"], &mut rows);
        for (k, v) in rows {
            out.push_str(&format!("{k}\t{v}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.replace(['\t', '\n'], " "))),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
