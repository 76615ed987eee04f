//! Reading and writing factorizations: a line-oriented DSL and a JSON mirror.

mod dsl;
mod json;

use std::fmt;

use serde::Serialize;

pub use dsl::{parse_entry_document, ParsedEntry};

use crate::fibration::Factorization;

/// Source text plus a display name for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDocument {
    pub name: String,
    pub text: String,
}

impl SourceDocument {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        SourceDocument {
            name: name.into(),
            text: text.into(),
        }
    }

    /// Decodes UTF-8; invalid input yields a positioned diagnostic.
    pub fn from_bytes(name: impl Into<String>, bytes: &[u8]) -> Result<Self, ParseDiagnostic> {
        match std::str::from_utf8(bytes) {
            Ok(text) => Ok(SourceDocument::new(name, text)),
            Err(e) => {
                let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
                let line = valid.matches('\n').count() + 1;
                let col = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                Err(ParseDiagnostic::error(line, col, "input is not valid UTF-8"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One message with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    pub fn warning(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Warning,
            ..ParseDiagnostic::error(line, column, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Dsl,
    Json,
}

impl Format {
    /// JSON documents start with `{`; everything else is read as DSL.
    pub fn detect(text: &str) -> Format {
        match text.trim_start().chars().next() {
            Some('{') => Format::Json,
            _ => Format::Dsl,
        }
    }
}

/// Successful parse plus any warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub factorization: Factorization,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses either format, chosen by [`Format::detect`].
pub fn parse(doc: &SourceDocument) -> Result<Parsed, Vec<ParseDiagnostic>> {
    match Format::detect(&doc.text) {
        Format::Dsl => dsl::parse_document(&doc.text),
        Format::Json => json::parse_json(&doc.text).map(|factorization| Parsed {
            factorization,
            warnings: Vec::new(),
        }),
    }
}

pub fn parse_str(text: &str) -> Result<Factorization, Vec<ParseDiagnostic>> {
    parse(&SourceDocument::new("<input>", text)).map(|p| p.factorization)
}

pub fn serialize(f: &Factorization, format: Format) -> String {
    match format {
        Format::Dsl => dsl::write_document(f),
        Format::Json => json::write_json(f),
    }
}
