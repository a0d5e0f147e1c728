//! Table rendering of JSON reports. Tables are derived from the JSON value, so both
//! formats carry the same numbers.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        v => v.to_string(),
    }
}

fn grid(out: &mut String, rows: &[Value]) {
    let Some(Value::Object(first)) = rows.first() else { return };
    let keys: Vec<&String> = first.keys().collect();
    let cells: Vec<Vec<String>> = rows.iter().map(|r| keys.iter().map(|k| cell(&r[k.as_str()])).collect()).collect();
    let width: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| cells.iter().map(|r| r[i].chars().count()).chain([k.chars().count()]).max().unwrap())
        .collect();
    let line = |vals: Vec<String>| vals.iter().zip(&width).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string();
    out.push_str(&line(keys.iter().map(|k| k.to_string()).collect()));
    out.push('\n');
    for r in cells {
        out.push_str(&line(r));
        out.push('\n');
    }
}

fn is_table(v: &Value) -> bool {
    match v {
        Value::Array(rows) => {
            !rows.is_empty()
                && rows.iter().all(|r| match (r, &rows[0]) {
                    (Value::Object(a), Value::Object(b)) => a.keys().eq(b.keys()),
                    _ => false,
                })
        }
        _ => false,
    }
}

pub fn table(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            let mut tables = Vec::new();
            for (k, x) in map {
                if is_table(x) {
                    tables.push((k, x));
                } else {
                    out.push_str(&format!("{k}: {}\n", cell(x)));
                }
            }
            for (k, x) in tables {
                out.push_str(&format!("\n[{k}]\n"));
                grid(&mut out, x.as_array().unwrap());
            }
        }
        v if is_table(v) => grid(&mut out, v.as_array().unwrap()),
        v => {
            out.push_str(&cell(v));
            out.push('\n');
        }
    }
    out
}
