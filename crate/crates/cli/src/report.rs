use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

pub fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

pub fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

/// What a command produced: text lines plus the JSON fields.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub certificates: Value,
    pub text: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            result: Value::Null,
            certificates: json!({}),
            text: Vec::new(),
            ok: true,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.text.push(s.into());
        self
    }

    pub fn certificate(&mut self, key: &str, v: Value) -> &mut Self {
        self.certificates[key] = v;
        self
    }

    /// Record a checked claim: a PASS/FAIL line, and failure sets the exit code.
    pub fn check(&mut self, ok: bool, claim: &str) -> &mut Self {
        self.ok &= ok;
        self.line(format!("{}: {claim}", if ok { "PASS" } else { "FAIL" }))
    }

    pub fn json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "certificates": self.certificates,
        })
    }
}
