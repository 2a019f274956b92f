//! Ordered, nested key/value reports rendered as text or JSON.

use std::fmt::Display;

use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Value(String),
    List(Vec<String>),
    Section(Report),
}

/// A report keeps its entries in insertion order, so rendering is
/// deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, Node)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn value(&mut self, key: &str, v: impl Display) -> &mut Self {
        self.entries.push((key.to_string(), Node::Value(v.to_string())));
        self
    }

    pub fn list<I, T>(&mut self, key: &str, items: I) -> &mut Self
    where
        I: IntoIterator<Item = T>,
        T: Display,
    {
        self.entries
            .push((key.to_string(), Node::List(items.into_iter().map(|t| t.to_string()).collect())));
        self
    }

    pub fn section(&mut self, key: &str, r: Report) -> &mut Self {
        self.entries.push((key.to_string(), Node::Section(r)));
        self
    }

    /// Looks up a top-level value.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|(k, n)| match n {
            Node::Value(v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn get_section(&self, key: &str) -> Option<&Report> {
        self.entries.iter().find_map(|(k, n)| match n {
            Node::Section(r) if k == key => Some(r),
            _ => None,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        for (k, n) in &self.entries {
            match n {
                Node::Value(v) => out.push_str(&format!("{pad}{k}: {v}\n")),
                Node::List(items) if items.is_empty() => out.push_str(&format!("{pad}{k}: []\n")),
                Node::List(items) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    for i in items {
                        out.push_str(&format!("{pad}  - {i}\n"));
                    }
                }
                Node::Section(r) => {
                    out.push_str(&format!("{pad}{k}:\n"));
                    r.write_text(out, depth + 1);
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, n) in &self.entries {
            let v = match n {
                Node::Value(v) => Value::String(v.clone()),
                Node::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
                Node::Section(r) => r.to_json(),
            };
            map.insert(k.clone(), v);
        }
        Value::Object(map)
    }
}
