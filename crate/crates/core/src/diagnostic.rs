//! Diagnostics and errors shared by every converter in the crate.
//!
//! Diagnostics are findings that do not stop a conversion (unknown
//! markers, dangling cross-references, ordering breaches reported by a
//! validator). [`Error`] is reserved for faults that make the output
//! meaningless. Both carry a stable short code from [`codes`].

use std::fmt;

use thiserror::Error;

/// Stable diagnostic and error codes.
///
/// `E_` codes are errors, `W_` codes warnings, `N_` codes notes.
pub mod codes {
    // fosf
    pub const E_ENCODING: &str = "E_ENCODING";
    pub const E_NO_MARKER: &str = "E_NO_MARKER";
    pub const E_NO_HEAD: &str = "E_NO_HEAD";
    pub const E_DUP_MARKER: &str = "E_DUP_MARKER";
    pub const W_UNKNOWN_MARKER: &str = "W_UNKNOWN_MARKER";
    pub const W_WRONG_TEMPLATE: &str = "W_WRONG_TEMPLATE";
    pub const W_PREAMBLE: &str = "W_PREAMBLE";

    // model
    pub const E_INVALID: &str = "E_INVALID";
    pub const E_BAD_DOCNUM: &str = "E_BAD_DOCNUM";
    pub const E_SELF_XREF: &str = "E_SELF_XREF";
    pub const E_DUP_SPEAKER: &str = "E_DUP_SPEAKER";
    pub const E_EMPTY_SPEAKER_CODE: &str = "E_EMPTY_SPEAKER_CODE";
    pub const E_UNKNOWN_SPEAKER: &str = "E_UNKNOWN_SPEAKER";
    pub const E_KIND_FIELD: &str = "E_KIND_FIELD";
    pub const E_NO_TRANSCRIPTION: &str = "E_NO_TRANSCRIPTION";
    pub const E_MEDIA_URL: &str = "E_MEDIA_URL";
    pub const E_EMPTY_SOURCE: &str = "E_EMPTY_SOURCE";
    pub const E_BAD_CHAR: &str = "E_BAD_CHAR";
    pub const W_UNRESOLVED_SPEAKER: &str = "W_UNRESOLVED_SPEAKER";
    pub const W_SPEAKER_CODE: &str = "W_SPEAKER_CODE";
    pub const W_NO_DOCNUM: &str = "W_NO_DOCNUM";

    // xml
    pub const E_MALFORMED: &str = "E_MALFORMED";
    pub const E_SCHEMA: &str = "E_SCHEMA";

    // tabular
    pub const E_RAGGED: &str = "E_RAGGED";
    pub const E_DELIMITER: &str = "E_DELIMITER";
    pub const E_KIND_SLOT: &str = "E_KIND_SLOT";
    pub const E_DUP_SLOT: &str = "E_DUP_SLOT";
    pub const W_SHORT_ROW: &str = "W_SHORT_ROW";
    pub const W_UNMAPPED_COLUMN: &str = "W_UNMAPPED_COLUMN";

    // shared by model, tabular and media
    pub const E_BAD_OFFSET: &str = "E_BAD_OFFSET";
    pub const E_OFFSET_ORDER: &str = "E_OFFSET_ORDER";
    pub const E_OFFSET_RANGE: &str = "E_OFFSET_RANGE";

    // media
    pub const E_POLICY: &str = "E_POLICY";
    pub const E_MANIFEST: &str = "E_MANIFEST";
    pub const E_MISSING_MEDIA: &str = "E_MISSING_MEDIA";
    pub const W_ZERO_SPAN: &str = "W_ZERO_SPAN";
    pub const W_UNPAIRED_MASTER: &str = "W_UNPAIRED_MASTER";
    pub const W_ORPHAN_OFFSETS: &str = "W_ORPHAN_OFFSETS";

    // render
    pub const E_KIND: &str = "E_KIND";
    pub const W_IGNORED_OPTION: &str = "W_IGNORED_OPTION";

    // catalog
    pub const E_DUP_DOCNUM: &str = "E_DUP_DOCNUM";
    pub const W_DANGLING_XREF: &str = "W_DANGLING_XREF";
    pub const N_ASYMMETRIC: &str = "N_ASYMMETRIC";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Note,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Note => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A single finding, rendered as `SEVERITY CODE line:N message`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub line: Option<usize>,
}

impl Diagnostic {
    pub fn error(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, message)
    }

    pub fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, message)
    }

    pub fn note(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(Severity::Note, code, message)
    }

    fn new(severity: Severity, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity,
            code,
            message: message.into(),
            line: None,
        }
    }

    pub fn at(mut self, line: impl Into<Option<usize>>) -> Self {
        self.line = line.into();
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{} {} line:{} {}", self.severity, self.code, line, self.message),
            None => write!(f, "{} {} line:- {}", self.severity, self.code, self.message),
        }
    }
}

/// True when at least one diagnostic has error severity.
pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// A converted value together with the non-fatal findings produced on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub value: T,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> Outcome<T> {
    pub fn new(value: T, diagnostics: Vec<Diagnostic>) -> Self {
        Outcome { value, diagnostics }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        Outcome {
            value: f(self.value),
            diagnostics: self.diagnostics,
        }
    }
}

/// Fatal conversion errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is not valid UTF-8 (first bad byte at offset {offset})")]
    Encoding { offset: usize },
    #[error("input declares encoding {declared:?}; only UTF-8 is accepted")]
    DeclaredEncoding { declared: String },
    #[error("line {line}: content before the first field marker")]
    NoMarker { line: usize },
    #[error("document has fields but no \\{marker} record head")]
    NoHead { marker: &'static str },
    #[error("input carries {count} error diagnostic(s); first: {first}")]
    Invalid { count: usize, first: String },
    #[error("line {line}: {value:?} is not a document number (box/doc[/subdoc])")]
    BadDocNum { value: String, line: usize },
    #[error("line {line}: {value:?} is not a non-negative decimal offset with at most two decimals")]
    BadOffset { value: String, line: usize },
    #[error("line {line}: malformed XML: {message}")]
    Malformed { message: String, line: usize },
    #[error("line {line}: {message}")]
    Schema { message: String, line: usize },
    #[error("line {line}: row has {cells} cells but the header has {expected}")]
    Ragged { cells: usize, expected: usize, line: usize },
    #[error("unsupported delimiter {0:?}; expected tab or comma")]
    Delimiter(char),
    #[error("no column maps to flint_transcription")]
    NoTranscription,
    #[error("slot {slot} is mapped by more than one column")]
    DuplicateSlot { slot: String },
    #[error("slot {slot} is not allowed in a {kind} text")]
    KindSlot { slot: String, kind: String },
    #[error("expected a {expected} text, found {found}")]
    Kind { expected: String, found: String },
    #[error("document number {0} occurs more than once")]
    DuplicateDocNum(String),
    #[error("offset {index} ({value}) is smaller than its predecessor")]
    OffsetOrder { index: usize, value: f64 },
    #[error("offset {index} ({value}) is outside [0, duration) or the duration is not positive")]
    OffsetRange { index: usize, value: f64 },
    #[error("line {line}: {message}")]
    Manifest { message: String, line: usize },
}

impl Error {
    /// The stable code for this error.
    pub fn code(&self) -> &'static str {
        use codes::*;
        match self {
            Error::Encoding { .. } | Error::DeclaredEncoding { .. } => E_ENCODING,
            Error::NoMarker { .. } => E_NO_MARKER,
            Error::NoHead { .. } => E_NO_HEAD,
            Error::Invalid { .. } => E_INVALID,
            Error::BadDocNum { .. } => E_BAD_DOCNUM,
            Error::BadOffset { .. } => E_BAD_OFFSET,
            Error::Malformed { .. } => E_MALFORMED,
            Error::Schema { .. } => E_SCHEMA,
            Error::Ragged { .. } => E_RAGGED,
            Error::Delimiter(_) => E_DELIMITER,
            Error::NoTranscription => E_NO_TRANSCRIPTION,
            Error::DuplicateSlot { .. } => E_DUP_SLOT,
            Error::KindSlot { .. } => E_KIND_SLOT,
            Error::Kind { .. } => E_KIND,
            Error::DuplicateDocNum(_) => E_DUP_DOCNUM,
            Error::OffsetOrder { .. } => E_OFFSET_ORDER,
            Error::OffsetRange { .. } => E_OFFSET_RANGE,
            Error::Manifest { .. } => E_MANIFEST,
        }
    }

    /// Source line the error refers to, when known.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::NoMarker { line }
            | Error::BadDocNum { line, .. }
            | Error::BadOffset { line, .. }
            | Error::Malformed { line, .. }
            | Error::Schema { line, .. }
            | Error::Ragged { line, .. }
            | Error::Manifest { line, .. } => Some(*line),
            _ => None,
        }
    }

    /// The error as an error-severity diagnostic.
    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.code(), self.to_string()).at(self.line())
    }

    pub(crate) fn invalid(diagnostics: &[Diagnostic]) -> Option<Error> {
        let errors: Vec<&Diagnostic> = diagnostics.iter().filter(|d| d.is_error()).collect();
        errors.first().map(|first| Error::Invalid {
            count: errors.len(),
            first: first.to_string(),
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Decode raw input as UTF-8, dropping a leading byte-order mark.
pub fn decode_utf8(input: &[u8]) -> Result<&str> {
    let text = std::str::from_utf8(input).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })?;
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_format() {
        let d = Diagnostic::warning(codes::W_UNKNOWN_MARKER, "unknown marker \\xx").at(3);
        assert_eq!(d.to_string(), "warning W_UNKNOWN_MARKER line:3 unknown marker \\xx");
        let d = Diagnostic::note(codes::N_ASYMMETRIC, "1/2 -> 1/3");
        assert_eq!(d.to_string(), "note N_ASYMMETRIC line:- 1/2 -> 1/3");
    }

    #[test]
    fn decode_rejects_invalid_bytes() {
        let err = decode_utf8(b"\\ft ok\n\xff\xfe").unwrap_err();
        assert_eq!(err, Error::Encoding { offset: 7 });
        assert_eq!(err.code(), "E_ENCODING");
        assert_eq!(decode_utf8("\u{feff}\\ft x".as_bytes()).unwrap(), "\\ft x");
    }
}
