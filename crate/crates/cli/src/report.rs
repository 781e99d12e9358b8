//! Deterministic reports. Every number is a string in exact form, objects
//! are key-sorted, and nothing depends on time, environment or thread
//! scheduling, so identical argv gives identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Invariant {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Invariant {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `defects` is empty; the detail counts them and shows the
    /// first one.
    pub fn empty<T: std::fmt::Debug>(name: impl Into<String>, defects: &[T]) -> Self {
        match defects.first() {
            None => Invariant::new(name, true, "no defects"),
            Some(first) => Invariant::new(name, false, format!("{} defect(s), first: {first:?}", defects.len())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub result: Value,
    pub invariants: Vec<Invariant>,
    pub engine_version: String,
}

impl Report {
    pub fn new(command: &str, parameters: BTreeMap<String, String>, result: Value, invariants: Vec<Invariant>) -> Self {
        Report {
            command: command.to_string(),
            parameters,
            result,
            invariants,
            engine_version: contraction_core::ENGINE_VERSION.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Invariant> {
        self.invariants.iter().filter(|i| !i.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{} {}", self.command, params.join(" "));
        render(&mut out, &self.result, 0);
        for inv in &self.invariants {
            let tag = if inv.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", inv.name, inv.detail);
        }
        let _ = writeln!(out, "engine {}", self.engine_version);
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Indented outline; arrays of flat objects become aligned tables.
fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                match scalar_text(child) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, child, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            if let Some(table) = table(items) {
                for row in table {
                    let _ = writeln!(out, "{pad}{row}");
                }
                return;
            }
            for item in items {
                match scalar_text(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(out, item, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

/// Rows of aligned columns when every item is an object of scalars with
/// the same keys.
fn table(items: &[Value]) -> Option<Vec<String>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut rows = vec![keys.iter().map(|k| k.to_string()).collect::<Vec<_>>()];
    for item in items {
        let obj = item.as_object()?;
        if obj.len() != keys.len() {
            return None;
        }
        let row = keys
            .iter()
            .map(|k| obj.get(*k).and_then(scalar_text))
            .collect::<Option<Vec<_>>>()?;
        rows.push(row);
    }
    let widths: Vec<usize> = (0..keys.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    Some(
        rows.iter()
            .map(|r| {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                cells.join("  ").trim_end().to_string()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_is_key_sorted_and_stable() {
        let r = Report::new(
            "demo",
            BTreeMap::from([("b".into(), "2".into()), ("a".into(), "1".into())]),
            json!({"z": "1/2", "a": ["x"]}),
            vec![Invariant::new("ok", true, "")],
        );
        let s = r.to_json();
        assert!(s.find("\"a\": \"1\"").unwrap() < s.find("\"b\": \"2\"").unwrap());
        assert!(s.find("\"a\": [").unwrap() < s.find("\"z\"").unwrap());
        assert_eq!(s, r.clone().to_json());
    }

    #[test]
    fn text_tables() {
        let r = Report::new(
            "family",
            BTreeMap::new(),
            json!({"rows": [{"p": "0", "raise": "1"}, {"p": "10", "raise": "-1/2"}]}),
            vec![Invariant::new("x", false, "bad")],
        );
        let text = r.to_text();
        assert!(text.contains("  p   raise\n  0   1\n  10  -1/2\n"));
        assert!(text.contains("FAIL x: bad"));
    }
}
