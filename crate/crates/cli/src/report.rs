//! JSON reports: resolved config and results, with wall-clock timings in a
//! separate section so the rest is byte-reproducible.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

pub struct Report {
    command: &'static str,
    config: Value,
    result: Value,
    timings: Value,
}

impl Report {
    pub fn new(command: &'static str, config: impl Serialize) -> Self {
        Self {
            command,
            config: serde_json::to_value(config).expect("config serializes"),
            result: Value::Null,
            timings: json!({}),
        }
    }

    pub fn config_mut(&mut self) -> &mut serde_json::Map<String, Value> {
        self.config.as_object_mut().expect("config is an object")
    }

    pub fn result(&mut self, result: impl Serialize) {
        self.result = serde_json::to_value(result).expect("result serializes");
    }

    pub fn timing(&mut self, stage: &str, seconds: f64) {
        self.timings[stage] = json!(seconds);
    }

    pub fn timings(&mut self, timings: impl Serialize) {
        let Value::Object(map) = serde_json::to_value(timings).expect("timings serialize") else { return };
        for (k, v) in map {
            self.timings[k] = v;
        }
    }

    pub fn write(&self, path: &Path) -> stgl::Result<()> {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "result": self.result,
            "timings": self.timings,
        });
        stgl::io::write_json(path, &doc)
    }
}
