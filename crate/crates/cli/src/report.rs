//! Reports and their two renderings.

use serde_json::{Map, Value as Json};

pub const SCHEMA: &str = "brauerkit/1";

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Str(String),
    Int(i64),
    Bool(bool),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl Value {
    pub fn str(s: impl ToString) -> Value {
        Value::Str(s.to_string())
    }

    pub fn strs<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
        Value::List(items.into_iter().map(|s| Value::str(s)).collect())
    }

    fn is_scalar(&self) -> bool {
        matches!(self, Value::Str(_) | Value::Int(_) | Value::Bool(_))
    }

    fn scalar_text(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            _ => unreachable!("not a scalar"),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Str(s) => Json::String(s.clone()),
            Value::Int(n) => Json::from(*n),
            Value::Bool(b) => Json::Bool(*b),
            Value::List(xs) => Json::Array(xs.iter().map(Value::to_json).collect()),
            Value::Map(kv) => Json::Object(kv.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }
}

/// Ordered key-value report of one job.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub fields: Vec<(String, Value)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: Value) {
        self.fields.push((key.to_string(), value));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Json {
        let mut m = Map::new();
        m.insert("schema".into(), Json::String(SCHEMA.into()));
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.to_json());
        }
        Json::Object(m)
    }

    pub fn render_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            write_text(&mut out, 0, k, v);
        }
        out
    }
}

fn write_text(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(indent);
    match v {
        v if v.is_scalar() => out.push_str(&format!("{pad}{key}: {}\n", v.scalar_text())),
        Value::List(xs) if xs.iter().all(Value::is_scalar) => {
            if xs.is_empty() {
                out.push_str(&format!("{pad}{key}: (none)\n"));
            } else {
                out.push_str(&format!("{pad}{key}:\n"));
                for x in xs {
                    out.push_str(&format!("{pad}  - {}\n", x.scalar_text()));
                }
            }
        }
        Value::List(xs) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in xs.iter().enumerate() {
                write_text(out, indent + 1, &format!("[{i}]"), x);
            }
        }
        Value::Map(kv) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in kv {
                write_text(out, indent + 1, k, x);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renderings() {
        let mut r = Report::default();
        r.push("job", Value::str("demo"));
        r.push("height", Value::str("1"));
        r.push("points", Value::strs(["(0, 0)"]));
        r.push("verdict", Value::Map(vec![("unit_at".into(), Value::Int(3)), ("exact".into(), Value::Bool(true))]));
        assert_eq!(
            r.render_text(),
            "job: demo\nheight: 1\npoints:\n  - (0, 0)\nverdict:\n  unit_at: 3\n  exact: true\n"
        );
        let j = r.render_machine();
        assert!(j.starts_with("{\n  \"schema\": \"brauerkit/1\",\n  \"job\": \"demo\""), "{j}");
    }
}
