//! Command output: text lines for humans, one JSON object under `--json`.

use lpa_core::report::{all_passed, Check};
use serde_json::{json, Value};

pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            outputs: json!({}),
            checks: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "outputs": self.outputs,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        for check in &self.checks {
            out.push_str(&format!("  {check}\n"));
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed()).count();
            out.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        }
        out
    }
}
