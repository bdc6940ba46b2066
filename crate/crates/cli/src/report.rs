use serde_json::{Map, Value};

/// Ordered `key: value` lines, or one JSON object with the same keys.
#[derive(Debug, Default, Clone)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.entries.iter().cloned().collect();
            let mut s = Value::Object(map).to_string();
            s.push('\n');
            return s;
        }
        let mut s = String::new();
        for (k, v) in &self.entries {
            s.push_str(k);
            s.push_str(": ");
            s.push_str(&text(v));
            s.push('\n');
        }
        s
    }
}

fn text(v: &Value) -> String {
    match v {
        Value::Bool(true) => "yes".into(),
        Value::Bool(false) => "no".into(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(text).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_share_keys() {
        let mut r = Report::new();
        r.put("verdict", true).put("orders", vec![2, 3]).put("delay", "none<=5");
        assert_eq!(r.render(false), "verdict: yes\norders: [2, 3]\ndelay: none<=5\n");
        assert_eq!(
            r.render(true),
            "{\"verdict\":true,\"orders\":[2,3],\"delay\":\"none<=5\"}\n"
        );
    }
}
