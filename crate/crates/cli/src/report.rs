//! Report rendering. A report is a summary plus one table; both formats
//! embed the run configuration so a report can be reproduced from itself.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Everything that determines the output of a run besides the subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub budget: u64,
    pub len_limit: usize,
    pub depth: usize,
    pub stage: u64,
    pub registry_fingerprint: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub summary: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: impl Into<String>, columns: &[&'static str]) -> Self {
        Report {
            command: command.into(),
            columns: columns.to_vec(),
            ..Report::default()
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        writeln!(out, "# ait {}", self.command).unwrap();
        writeln!(
            out,
            "# budget={} len_limit={} depth={} stage={}",
            config.budget, config.len_limit, config.depth, config.stage
        )
        .unwrap();
        writeln!(out, "# registry={}", config.registry_fingerprint).unwrap();
        for (k, v) in &self.summary {
            writeln!(out, "# {k}={}", plain(v)).unwrap();
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| csv_cell(&plain(v))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let summary: Map<String, Value> = self.summary.iter().cloned().collect();
        let doc = json!({
            "config": config,
            "results": {
                "command": self.command,
                "summary": summary,
                "columns": self.columns,
                "rows": self.rows,
            },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig {
            budget: 10,
            len_limit: 4,
            depth: 3,
            stage: 7,
            registry_fingerprint: "abc".into(),
        }
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo", &["a", "b"]);
        r.note("mass", "3/2^3");
        r.row(vec![json!("0"), json!(1)]);
        r.row(vec![json!("x,y"), Value::Null]);
        assert_eq!(
            r.to_csv(&config()),
            "# ait demo\n# budget=10 len_limit=4 depth=3 stage=7\n# registry=abc\n\
             # mass=3/2^3\na,b\n0,1\n\"x,y\",\n"
        );
    }

    #[test]
    fn json_has_config_and_results() {
        let r = Report::new("demo", &["a"]);
        let v: Value = serde_json::from_str(&r.to_json(&config())).unwrap();
        assert_eq!(v["config"]["budget"], 10);
        assert_eq!(v["results"]["command"], "demo");
        assert_eq!(v.as_object().unwrap().len(), 2);
    }
}
