//! Reports shared by the text and JSON output modes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Outcome of a command; determines the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Solved,
    /// Solved over the algebraic closure: `A² − DB² = c·F`.
    SolvedUpToConstant,
    Verified,
    NotWithinBounds,
    InputError,
    Degenerate,
    InternalError,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Solved | Verdict::SolvedUpToConstant | Verdict::Verified => 0,
            Verdict::NotWithinBounds => 1,
            Verdict::InputError => 2,
            Verdict::Degenerate => 3,
            Verdict::InternalError => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Solved => "solved",
            Verdict::SolvedUpToConstant => "solved-up-to-constant",
            Verdict::Verified => "verified",
            Verdict::NotWithinBounds => "not-within-bounds",
            Verdict::InputError => "input-error",
            Verdict::Degenerate => "degenerate",
            Verdict::InternalError => "internal-error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    /// Canonical forms of the inputs.
    pub inputs: BTreeMap<String, String>,
    pub config: BTreeMap<String, Value>,
    /// One object per finding; each has a `kind`.
    pub entries: Vec<Value>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            config: BTreeMap::new(),
            entries: Vec::new(),
            verdict: Verdict::Verified,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) {
        self.inputs.insert(name.to_string(), value.to_string());
    }

    pub fn config(&mut self, name: &str, value: impl Into<Value>) {
        self.config.insert(name.to_string(), value.into());
    }

    /// Adds `{"kind": kind, ..fields}`.
    pub fn entry(&mut self, kind: &str, fields: Value) {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), kind.into());
        if let Value::Object(m) = fields {
            obj.extend(m);
        }
        self.entries.push(Value::Object(obj));
    }

    pub fn finish(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for e in &self.entries {
            let Value::Object(m) = e else { continue };
            let kind = m.get("kind").and_then(Value::as_str).unwrap_or("entry");
            let field = |k: &str| m.get(k).and_then(Value::as_str).unwrap_or("");
            if kind == "check" {
                let _ = writeln!(out, "{} {}: {}", field("result"), field("name"), field("identity"));
                continue;
            }
            let rest: Vec<String> = m
                .iter()
                .filter(|(k, _)| *k != "kind")
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect();
            let _ = writeln!(out, "{kind}: {}", rest.join(" "));
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        out
    }
}
