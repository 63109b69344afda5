//! Reports, output routing and exit statuses.

use std::fmt;
use std::path::PathBuf;

use ocpadic::suites::VERSION;
use ocpadic::Error;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => write!(f, "{s}"),
        }
    }
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_PARSE,
            CliError::Core(e) => match e {
                Error::Parse(_) | Error::Template(_) | Error::Mismatch(_) | Error::InvalidContext(_) => EXIT_PARSE,
                Error::PrecisionExhausted { .. } | Error::UnknownValuation { .. } => EXIT_PRECISION,
                _ => EXIT_CHECK,
            },
        }
    }

    /// The operation that ran out of precision, when that is the cause.
    pub fn operation(&self) -> Option<&'static str> {
        match self {
            CliError::Core(Error::PrecisionExhausted { op, .. }) => Some(op),
            CliError::Core(Error::UnknownValuation { .. }) => Some("newton_polygon"),
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// The outcome of one command: human-readable lines, a JSON value and,
/// optionally, a data payload for `--out`.
pub struct Report {
    pub command: String,
    pub lines: Vec<String>,
    pub json: Value,
    pub pass: bool,
    pub data: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            lines: Vec::new(),
            json: Value::Null,
            pass: true,
            data: None,
        }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    pub fn text(mut self, s: &str) -> Self {
        self.lines.extend(s.lines().map(str::to_string));
        self
    }

    pub fn json(mut self, v: Value) -> Self {
        self.json = v;
        self
    }

    pub fn pass(mut self, ok: bool) -> Self {
        self.pass = ok;
        self
    }

    pub fn data(mut self, d: String) -> Self {
        self.data = Some(d);
        self
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let v = json!({
                "version": VERSION,
                "command": self.command,
                "pass": self.pass,
                "result": self.json,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
        } else {
            let mut out = String::new();
            for l in &self.lines {
                out.push_str(l);
                out.push('\n');
            }
            out.push_str(&format!("# {VERSION}\n"));
            out
        }
    }
}

pub fn error_report(command: &str, e: &CliError, as_json: bool) -> String {
    let op = e.operation();
    if as_json {
        let v = json!({
            "version": VERSION,
            "command": command,
            "pass": false,
            "error": e.to_string(),
            "operation": op,
            "status": e.status(),
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
    } else {
        let mut out = format!("error: {e}\n");
        if let Some(op) = op {
            out.push_str(&format!("precision exhausted in operation `{op}`\n"));
        }
        out.push_str(&format!("# {VERSION}\n"));
        out
    }
}

pub fn write_out(path: &Option<PathBuf>, report: &Report, as_json: bool) -> CliResult<()> {
    if let Some(path) = path {
        let body = match &report.data {
            Some(d) => d.clone(),
            None => report.render(as_json),
        };
        std::fs::write(path, body).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
