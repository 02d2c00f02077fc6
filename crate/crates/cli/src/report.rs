//! Report envelope and the exit-code contract.

use std::fmt;

use logzeta::algebra::{LinearForm, Rational};
use logzeta::monodromy::Subtorus;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "logzeta-report/1";

/// What a command computed.
pub struct Outcome {
    pub result: Value,
    pub text: Vec<String>,
    /// `None` when the command has no pass/fail notion.
    pub verdict: Option<bool>,
}

impl Outcome {
    pub fn new(result: Value, text: Vec<String>, verdict: Option<bool>) -> Self {
        Outcome {
            result,
            text,
            verdict,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }
}

/// An input or validation failure; always exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        InputError {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<logzeta::Error> for InputError {
    fn from(e: logzeta::Error) -> Self {
        use logzeta::Error as E;
        let kind = match e {
            E::Parse(_) => "parse",
            E::Invalid(_) | E::UnknownDivisor(_) | E::UnknownPoint(_) | E::EmptyPointList => "invalid",
            _ => "unsupported",
        };
        InputError::new(kind, e.to_string())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// `num/den` in lowest terms, denominator always shown.
pub fn q(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn form(f: &LinearForm) -> String {
    f.to_string()
}

pub fn subtorus(t: &Subtorus) -> Value {
    json!({
        "primitive": t.primitive.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "phase": q(&t.phase),
    })
}

pub fn subtorus_text(t: &Subtorus) -> String {
    let a: Vec<String> = t.primitive.iter().map(|x| x.to_string()).collect();
    format!("t^({}) = exp(2 pi i {})", a.join(","), q(&t.phase))
}

pub fn envelope(command: &str, digest: Option<&str>, body: (&str, Value), verdict: Option<bool>) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA,
        "command": command,
        "input_sha256": digest,
        body.0: body.1,
        "verdict": verdict,
    })
}

/// Pretty JSON with a trailing newline; keys are sorted, so identical input
/// gives identical bytes.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_text(command: &str, digest: Option<&str>, out: &Outcome) -> String {
    let mut s = format!("command: {command}\n");
    if let Some(d) = digest {
        s.push_str(&format!("input_sha256: {d}\n"));
    }
    for line in &out.text {
        s.push_str(line);
        s.push('\n');
    }
    if let Some(v) = out.verdict {
        s.push_str(&format!("verdict: {}\n", if v { "PASS" } else { "FAIL" }));
    }
    s
}
