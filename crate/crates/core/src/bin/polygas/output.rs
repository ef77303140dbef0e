use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Objects become `key<TAB>value` lines. An array of objects under `rows`
/// becomes a table with a header line.
fn tsv(v: &Value, out: &mut String) {
    let Value::Object(map) = v else {
        out.push_str(&cell(v));
        out.push('\n');
        return;
    };
    for (k, val) in map {
        if k == "rows" {
            continue;
        }
        out.push_str(&format!("{k}\t{}\n", cell(val)));
    }
    if let Some(Value::Array(rows)) = map.get("rows") {
        let Some(Value::Object(first)) = rows.first() else {
            return;
        };
        let header: Vec<&String> = first.keys().collect();
        out.push_str(
            &header
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join("\t"),
        );
        out.push('\n');
        for row in rows {
            let line: Vec<String> = header.iter().map(|h| cell(&row[h.as_str()])).collect();
            out.push_str(&line.join("\t"));
            out.push('\n');
        }
    }
}

pub fn emit(v: &Value, format: Format) {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut s = String::new();
            tsv(v, &mut s);
            s
        }
    };
    // A closed pipe (`polygas ... | head`) is not an error.
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
