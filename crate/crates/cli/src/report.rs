//! Result documents and error classes shared by every subcommand.

use permkit_core::Error;
use serde_json::{Map, Value};

/// The first output line: a decision or a computed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    No,
    Value(String),
}

impl Outcome {
    pub fn decide(yes: bool) -> Self {
        if yes {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }

    fn text(&self) -> &str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Value(v) => v,
        }
    }
}

/// Answer plus named fields, in insertion order.
#[derive(Clone, Debug)]
pub struct Report {
    command: &'static str,
    digest: String,
    outcome: Outcome,
    fields: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(command: &'static str, digest: String) -> Self {
        Report {
            command,
            digest,
            outcome: Outcome::Value(String::new()),
            fields: Vec::new(),
        }
    }

    pub fn headline(&mut self, outcome: Outcome) {
        self.outcome = outcome;
    }

    pub fn field(&mut self, key: &'static str, value: Value) {
        self.fields.push((key, value));
    }

    pub fn exit_code(&self) -> u8 {
        match self.outcome {
            Outcome::No => 1,
            _ => 0,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut obj = Map::new();
            obj.insert("answer".into(), Value::String(self.outcome.text().to_string()));
            for (k, v) in &self.fields {
                obj.insert((*k).into(), v.clone());
            }
            obj.insert("command".into(), Value::String(self.command.into()));
            obj.insert("input-digest".into(), Value::String(self.digest.clone()));
            format!("{}\n", Value::Object(obj))
        } else {
            let mut s = format!("{}\n", self.outcome.text());
            for (k, v) in &self.fields {
                s.push_str(format!("{k}: {}", human(v)).trim_end());
                s.push('\n');
            }
            s
        }
    }
}

/// Plain-text form of a field: strings unquoted, point lists comma-joined,
/// lists of lists as `{..}` blocks, lists of strings space-joined.
fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_array) => items
            .iter()
            .map(|i| format!("{{{}}}", human(i)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(items) if items.iter().all(Value::is_string) => {
            items.iter().map(human).collect::<Vec<_>>().join(" ")
        }
        Value::Array(items) => items.iter().map(human).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// A failed run: message for stderr and process exit status.
#[derive(Clone, Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn internal(message: String) -> Self {
        CliError { code: 4, message }
    }

    /// Resource caps exit 3, failed self-checks exit 4, and everything else
    /// is bad input (exit 2).
    pub fn from_core(e: Error, flag: Option<&str>) -> Self {
        let code = match e {
            Error::Resource(_) => 3,
            Error::Internal(_) => 4,
            _ => 2,
        };
        let message = match flag {
            Some(f) if code == 2 => format!("{f}: {e}"),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}
