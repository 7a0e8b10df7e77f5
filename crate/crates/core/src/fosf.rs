//! Field ordered standard format ("back-slashed" files).
//!
//! A FOSF file is a sequence of marker lines (`\ft 'barki'nani`) with
//! optional continuation lines. Only start tags are explicit: a field ends
//! where the next marker line begins, and a record ends where the next
//! record-head marker begins.
//!
//! Marker tables
//!
//! | template     | markers                                                         | head        |
//! |--------------|-----------------------------------------------------------------|-------------|
//! | metadata     | dn cr fl an cm cd gp lg loc da o snc                            | `dn`        |
//! | lexicon      | ft or ncr sd ncft fg ncfg fft ncfft os ncos na ncna ng ncng     | `ft`        |
//! | primary_text | sp ft fg ncr ncft ncfg fft ncfft os ncos na ncna ng ncng        | `sp` or `ft`|
//!
//! Lexicon and primary-text files additionally accept the toolkit
//! extension markers `offset` and `analyst` inside entries, and a
//! preamble (fields before the first head) holding text-level
//! declarations: `media` plus any metadata-template marker.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::diagnostic::{codes, decode_utf8, Diagnostic, Error, Result};

pub const METADATA_MARKERS: &[&str] = &["dn", "cr", "fl", "an", "cm", "cd", "gp", "lg", "loc", "da", "o", "snc"];

pub const LEXICON_MARKERS: &[&str] = &[
    "ft", "or", "ncr", "sd", "ncft", "fg", "ncfg", "fft", "ncfft", "os", "ncos", "na", "ncna", "ng", "ncng",
];

pub const PRIMARY_TEXT_MARKERS: &[&str] = &[
    "sp", "ft", "fg", "ncr", "ncft", "ncfg", "fft", "ncfft", "os", "ncos", "na", "ncna", "ng", "ncng",
];

/// Extension markers valid inside lexicon and primary-text entries.
pub const UNIT_EXTENSION_MARKERS: &[&str] = &["offset", "analyst"];

/// Extension markers valid in the preamble of lexicon and primary-text files.
pub const PREAMBLE_EXTENSION_MARKERS: &[&str] = &["media"];

/// Markers that may occur more than once within one record.
pub const REPEATABLE_MARKERS: &[&str] = &["snc", "os", "ncos", "or", "cr", "media"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    Metadata,
    Lexicon,
    PrimaryText,
}

impl Template {
    pub fn markers(self) -> &'static [&'static str] {
        match self {
            Template::Metadata => METADATA_MARKERS,
            Template::Lexicon => LEXICON_MARKERS,
            Template::PrimaryText => PRIMARY_TEXT_MARKERS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Template::Metadata => "metadata",
            Template::Lexicon => "lexicon",
            Template::PrimaryText => "primary_text",
        }
    }

    fn is_text(self) -> bool {
        !matches!(self, Template::Metadata)
    }

    /// Markers allowed inside an entry record of this template.
    fn allows_in_entry(self, marker: &str) -> bool {
        self.markers().contains(&marker) || (self.is_text() && UNIT_EXTENSION_MARKERS.contains(&marker))
    }

    /// Markers allowed in the preamble without a warning.
    pub(crate) fn allows_in_preamble(self, marker: &str) -> bool {
        self.is_text() && (METADATA_MARKERS.contains(&marker) || PREAMBLE_EXTENSION_MARKERS.contains(&marker))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Template {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "metadata" => Ok(Template::Metadata),
            "lexicon" => Ok(Template::Lexicon),
            "primary_text" | "text" => Ok(Template::PrimaryText),
            other => Err(format!("unknown template {other:?}")),
        }
    }
}

/// True if `name` appears in any marker table, including the extensions.
pub fn is_known_marker(name: &str) -> bool {
    [
        METADATA_MARKERS,
        LEXICON_MARKERS,
        PRIMARY_TEXT_MARKERS,
        UNIT_EXTENSION_MARKERS,
        PREAMBLE_EXTENSION_MARKERS,
    ]
    .iter()
    .any(|table| table.contains(&name))
}

/// Guess the template of a FOSF file from its markers: files with `\ft`
/// fields are primary text when some field is `\sp` and lexicons
/// otherwise; anything else is read as metadata.
pub fn sniff_template(input: &str) -> Template {
    let mut has_ft = false;
    for line in input.lines() {
        let Some(rest) = line.strip_prefix('\\') else {
            continue;
        };
        match rest.split_whitespace().next() {
            Some("sp") => return Template::PrimaryText,
            Some("ft") => has_ft = true,
            _ => {}
        }
    }
    if has_ft {
        Template::Lexicon
    } else {
        Template::Metadata
    }
}

/// A marker name as written, without the leading backslash.
///
/// Comparison is case-sensitive; `\FT` is an unknown marker and is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMarker {
    pub name: String,
    pub template: Template,
    pub unknown: bool,
}

impl FieldMarker {
    pub fn new(name: impl Into<String>, template: Template) -> Self {
        let name = name.into();
        let unknown = !is_known_marker(&name);
        FieldMarker {
            name,
            template,
            unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawField {
    pub marker: FieldMarker,
    pub value: String,
    /// 1-based line of the marker.
    pub line: usize,
}

impl RawField {
    pub fn new(name: &str, value: impl Into<String>, template: Template, line: usize) -> Self {
        RawField {
            marker: FieldMarker::new(name, template),
            value: value.into(),
            line,
        }
    }

    pub fn name(&self) -> &str {
        &self.marker.name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    /// Fields preceding the first record head.
    Preamble,
    /// A record opened by the template's head marker.
    Entry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub kind: RecordKind,
    pub fields: Vec<RawField>,
}

impl RawRecord {
    pub fn get(&self, marker: &str) -> Option<&RawField> {
        self.fields.iter().find(|f| f.name() == marker)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FosfDocument {
    pub template: Template,
    pub records: Vec<RawRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

impl FosfDocument {
    pub fn new(template: Template) -> Self {
        FosfDocument {
            template,
            records: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn fields(&self) -> impl Iterator<Item = &RawField> {
        self.records.iter().flat_map(|r| r.fields.iter())
    }

    /// Per-record `(marker, value)` sequences, the shape compared by round trips.
    pub fn field_pairs(&self) -> Vec<Vec<(String, String)>> {
        self.records
            .iter()
            .map(|r| {
                r.fields
                    .iter()
                    .map(|f| (f.marker.name.clone(), f.value.clone()))
                    .collect()
            })
            .collect()
    }
}

/// The marker opening each record in a document.
///
/// Primary text uses `sp` when any field carries it, falling back to `ft`.
pub fn record_head(template: Template, fields: &[RawField]) -> &'static str {
    match template {
        Template::Metadata => "dn",
        Template::Lexicon => "ft",
        Template::PrimaryText => {
            if fields.iter().any(|f| f.name() == "sp") {
                "sp"
            } else {
                "ft"
            }
        }
    }
}

/// Parse a FOSF byte stream.
///
/// Continuation lines are trimmed and joined to the open field with a single
/// space; blank lines are skipped. The returned diagnostics combine record
/// inference findings with [`validate_markers`].
pub fn parse_fosf(input: &[u8], template: Template) -> Result<FosfDocument> {
    let text = decode_utf8(input)?;
    let fields = lex_fields(text, template)?;
    let (records, mut diagnostics) = infer_record_boundaries(fields, template)?;
    let mut doc = FosfDocument {
        template,
        records,
        diagnostics: Vec::new(),
    };
    diagnostics.extend(validate_markers(&doc));
    doc.diagnostics = diagnostics;
    Ok(doc)
}

fn lex_fields(text: &str, template: Template) -> Result<Vec<RawField>> {
    let mut fields: Vec<RawField> = Vec::new();
    for (index, raw_line) in text.split('\n').enumerate() {
        let line_no = index + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if let Some(rest) = line.strip_prefix('\\') {
            let (name, value) = match rest.find(char::is_whitespace) {
                Some(at) => (&rest[..at], rest[at..].trim()),
                None => (rest, ""),
            };
            fields.push(RawField::new(name, value, template, line_no));
        } else if !line.trim().is_empty() {
            let field = fields.last_mut().ok_or(Error::NoMarker { line: line_no })?;
            if !field.value.is_empty() {
                field.value.push(' ');
            }
            field.value.push_str(line.trim());
        }
    }
    Ok(fields)
}

/// Group fields into records at each occurrence of the record-head marker.
///
/// Fields ahead of the first head form a [`RecordKind::Preamble`] record. A
/// `W_PREAMBLE` warning is raised when the preamble holds anything other than
/// text-level declarations.
pub fn infer_record_boundaries(fields: Vec<RawField>, template: Template) -> Result<(Vec<RawRecord>, Vec<Diagnostic>)> {
    let mut diagnostics = Vec::new();
    if fields.is_empty() {
        return Ok((Vec::new(), diagnostics));
    }
    let head = record_head(template, &fields);
    // A text file may consist of declarations alone; entry fields need a head.
    let headless_entry = fields
        .iter()
        .any(|f| !template.is_text() || template.allows_in_entry(f.name()));
    if !fields.iter().any(|f| f.name() == head) && headless_entry {
        return Err(Error::NoHead { marker: head });
    }

    let mut records: Vec<RawRecord> = Vec::new();
    for field in fields {
        if field.name() == head {
            records.push(RawRecord {
                kind: RecordKind::Entry,
                fields: vec![field],
            });
            continue;
        }
        match records.last_mut() {
            Some(record) => record.fields.push(field),
            None => records.push(RawRecord {
                kind: RecordKind::Preamble,
                fields: vec![field],
            }),
        }
    }

    if let Some(preamble) = records.first().filter(|r| r.kind == RecordKind::Preamble) {
        if let Some(stray) = preamble.fields.iter().find(|f| !template.allows_in_preamble(f.name())) {
            diagnostics.push(
                Diagnostic::warning(
                    codes::W_PREAMBLE,
                    format!(
                        "{} field(s) precede the first \\{head}; kept in a document preamble",
                        preamble.fields.len()
                    ),
                )
                .at(stray.line),
            );
        }
    }
    Ok((records, diagnostics))
}

/// Check markers against the template tables.
///
/// Reports unknown markers and markers that belong to another template as
/// warnings, and a repeated non-repeatable marker within a record as an error.
pub fn validate_markers(doc: &FosfDocument) -> Vec<Diagnostic> {
    let template = doc.template;
    let mut diagnostics = Vec::new();
    for record in &doc.records {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for field in &record.fields {
            let name = field.name();
            if field.marker.unknown {
                diagnostics.push(
                    Diagnostic::warning(
                        codes::W_UNKNOWN_MARKER,
                        format!("unknown marker \\{name}; value preserved"),
                    )
                    .at(field.line),
                );
            } else if record.kind == RecordKind::Entry && !template.allows_in_entry(name) {
                diagnostics.push(
                    Diagnostic::warning(
                        codes::W_WRONG_TEMPLATE,
                        format!("marker \\{name} does not belong to the {template} template"),
                    )
                    .at(field.line),
                );
            }

            if field.marker.unknown || REPEATABLE_MARKERS.contains(&name) {
                continue;
            }
            if let Some(first) = seen.insert(name, field.line) {
                diagnostics.push(
                    Diagnostic::error(
                        codes::E_DUP_MARKER,
                        format!("\\{name} repeated within one record (first at line {first})"),
                    )
                    .at(field.line),
                );
            }
        }
    }
    diagnostics
}

/// Emit the canonical FOSF form of a document.
///
/// One `\marker value` line per field, embedded newlines re-emitted as
/// continuation lines, one blank line between records, trailing newline.
pub fn emit_fosf(doc: &FosfDocument) -> Result<String> {
    if let Some(err) = Error::invalid(&doc.diagnostics) {
        return Err(err);
    }
    let mut out = String::new();
    for (index, record) in doc.records.iter().enumerate() {
        if index > 0 {
            out.push('\n');
        }
        for field in &record.fields {
            write_field(&mut out, field.name(), &field.value);
        }
    }
    Ok(out)
}

pub(crate) fn write_field(out: &mut String, marker: &str, value: &str) {
    out.push('\\');
    out.push_str(marker);
    let mut lines = value.split('\n').map(str::trim).filter(|l| !l.is_empty());
    if let Some(first) = lines.next() {
        out.push(' ');
        out.push_str(first);
    }
    out.push('\n');
    for line in lines {
        // a continuation must not open a new field
        if line.starts_with('\\') {
            out.push(' ');
        }
        out.push_str(line);
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_sniffing() {
        assert_eq!(sniff_template("\\dn 1/2\n\\lg Garrwa\n"), Template::Metadata);
        assert_eq!(sniff_template("\\dn 1/2\n\\ft a\n\\fg b\n"), Template::Lexicon);
        assert_eq!(sniff_template("\\ft a\n\\sp G\n"), Template::PrimaryText);
    }

    fn pairs(doc: &FosfDocument) -> Vec<Vec<(String, String)>> {
        doc.field_pairs()
    }

    fn p(marker: &str, value: &str) -> (String, String) {
        (marker.to_string(), value.to_string())
    }

    #[test]
    fn parses_lexicon_entry() {
        let doc = parse_fosf(b"\\ft 'barki'nani\n\\fg bad\n\\sd adjective", Template::Lexicon).unwrap();
        assert_eq!(
            pairs(&doc),
            vec![vec![p("ft", "'barki'nani"), p("fg", "bad"), p("sd", "adjective")]]
        );
        assert!(doc.diagnostics.is_empty());
        let lines: Vec<usize> = doc.fields().map(|f| f.line).collect();
        assert_eq!(lines, vec![1, 2, 3]);
    }

    #[test]
    fn empty_input_has_no_records() {
        let doc = parse_fosf(b"", Template::Lexicon).unwrap();
        assert!(doc.records.is_empty());
        assert!(doc.diagnostics.is_empty());
        let doc = parse_fosf(b"\n\n  \n", Template::Metadata).unwrap();
        assert!(doc.records.is_empty());
    }

    #[test]
    fn continuation_lines_join_with_one_space() {
        let doc = parse_fosf(b"\\fft This is\na long translation", Template::Lexicon);
        // no \ft head in a lexicon file
        assert_eq!(doc.unwrap_err(), Error::NoHead { marker: "ft" });

        let fields = lex_fields("\\fft This is\na long translation", Template::Lexicon).unwrap();
        assert_eq!(fields.len(), 1);
        assert_eq!(fields[0].value, "This is a long translation");

        let doc = parse_fosf(
            b"\\ft x\n\\fft This is   \n   a long\n\n translation\r\n",
            Template::Lexicon,
        )
        .unwrap();
        assert_eq!(doc.records[0].fields[1].value, "This is a long translation");
    }

    #[test]
    fn content_before_first_marker_is_an_error() {
        let err = parse_fosf(b"\n stray text\n\\ft x", Template::Lexicon).unwrap_err();
        assert_eq!(err, Error::NoMarker { line: 2 });
        assert_eq!(err.code(), codes::E_NO_MARKER);
    }

    #[test]
    fn non_utf8_is_rejected() {
        let err = parse_fosf(b"\\ft caf\xe9", Template::Lexicon).unwrap_err();
        assert_eq!(err.code(), codes::E_ENCODING);
    }

    #[test]
    fn marker_without_value_and_odd_whitespace() {
        let doc = parse_fosf(b"\\ft\tx\n\\fft\n\\fg  y  ", Template::Lexicon).unwrap();
        assert_eq!(pairs(&doc), vec![vec![p("ft", "x"), p("fft", ""), p("fg", "y")]]);
    }

    fn raw(list: &[(&str, &str)], template: Template) -> Vec<RawField> {
        list.iter()
            .enumerate()
            .map(|(i, (m, v))| RawField::new(m, *v, template, i + 1))
            .collect()
    }

    #[test]
    fn lexicon_records_start_at_ft() {
        let fields = raw(&[("ft", "a"), ("fg", "b"), ("ft", "c"), ("fg", "d")], Template::Lexicon);
        let (records, diags) = infer_record_boundaries(fields, Template::Lexicon).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records
            .iter()
            .all(|r| r.fields.len() == 2 && r.kind == RecordKind::Entry));
        assert!(diags.is_empty());
    }

    #[test]
    fn metadata_single_field_record() {
        let fields = raw(&[("dn", "1/2/3")], Template::Metadata);
        let (records, _) = infer_record_boundaries(fields, Template::Metadata).unwrap();
        assert_eq!(records.len(), 1);
    }

    #[test]
    fn primary_text_prefers_sp() {
        let t = Template::PrimaryText;
        let fields = raw(&[("sp", "G"), ("ft", "x"), ("fg", "y"), ("sp", "G"), ("ft", "z")], t);
        let (records, _) = infer_record_boundaries(fields, t).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].fields.len(), 3);
        assert_eq!(records[1].fields.len(), 2);

        let fields = raw(&[("ft", "x"), ("fg", "y"), ("ft", "z")], t);
        let (records, _) = infer_record_boundaries(fields, t).unwrap();
        assert_eq!(records.len(), 2);
    }

    #[test]
    fn missing_head_is_an_error() {
        let fields = raw(&[("fg", "b")], Template::Lexicon);
        assert_eq!(
            infer_record_boundaries(fields, Template::Lexicon).unwrap_err(),
            Error::NoHead { marker: "ft" }
        );
    }

    #[test]
    fn preamble_warning_only_for_stray_fields() {
        let t = Template::Lexicon;
        let decl = raw(
            &[
                ("snc", "Stumpy George (G)"),
                ("media", "audio/mp3 302b.mp3"),
                ("ft", "x"),
            ],
            t,
        );
        let (records, diags) = infer_record_boundaries(decl, t).unwrap();
        assert_eq!(records[0].kind, RecordKind::Preamble);
        assert!(diags.is_empty());

        let stray = raw(&[("fg", "y"), ("ft", "x")], t);
        let (records, diags) = infer_record_boundaries(stray, t).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::W_PREAMBLE);
    }

    fn doc_of(template: Template, records: Vec<Vec<(&str, &str)>>) -> FosfDocument {
        let mut line = 0;
        let records = records
            .into_iter()
            .map(|fields| RawRecord {
                kind: RecordKind::Entry,
                fields: fields
                    .into_iter()
                    .map(|(m, v)| {
                        line += 1;
                        RawField::new(m, v, template, line)
                    })
                    .collect(),
            })
            .collect();
        FosfDocument {
            template,
            records,
            diagnostics: Vec::new(),
        }
    }

    #[test]
    fn speaker_in_lexicon_is_wrong_template() {
        let doc = doc_of(Template::Lexicon, vec![vec![("ft", "x"), ("sp", "G")]]);
        let diags = validate_markers(&doc);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::W_WRONG_TEMPLATE);
        assert_eq!(diags[0].line, Some(2));
    }

    #[test]
    fn lexicon_only_markers_in_primary_text() {
        let doc = doc_of(
            Template::PrimaryText,
            vec![vec![("ft", "x"), ("sd", "noun"), ("or", "2")]],
        );
        let codes_: Vec<_> = validate_markers(&doc).iter().map(|d| d.code).collect();
        assert_eq!(codes_, vec![codes::W_WRONG_TEMPLATE, codes::W_WRONG_TEMPLATE]);
    }

    #[test]
    fn valid_unique_markers_are_clean() {
        let doc = doc_of(
            Template::Lexicon,
            vec![vec![("ft", "x"), ("fg", "y"), ("offset", "1.00"), ("analyst", "NK")]],
        );
        assert!(validate_markers(&doc).is_empty());
    }

    #[test]
    fn repeatable_and_duplicate_markers() {
        let doc = doc_of(
            Template::Metadata,
            vec![vec![
                ("dn", "1/2"),
                ("snc", "A (A)"),
                ("snc", "B (B)"),
                ("cr", "1/3"),
                ("cr", "1/4"),
            ]],
        );
        assert!(validate_markers(&doc).is_empty());

        let doc = doc_of(Template::Lexicon, vec![vec![("ft", "x"), ("fg", "a"), ("fg", "b")]]);
        let diags = validate_markers(&doc);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::E_DUP_MARKER);
        assert!(diags[0].is_error());
    }

    #[test]
    fn unknown_and_uppercase_markers_are_kept() {
        let src = "\\ft x\n\\FT y\n\\zz keep me\n";
        let doc = parse_fosf(src.as_bytes(), Template::Lexicon).unwrap();
        let codes_: Vec<_> = doc.diagnostics.iter().map(|d| d.code).collect();
        assert_eq!(codes_, vec![codes::W_UNKNOWN_MARKER, codes::W_UNKNOWN_MARKER]);
        assert!(doc.records[0].fields[1].marker.unknown);
        assert_eq!(emit_fosf(&doc).unwrap(), src);
    }

    #[test]
    fn emit_single_and_empty() {
        let doc = doc_of(Template::Lexicon, vec![vec![("ft", "'barki'nani")]]);
        assert_eq!(emit_fosf(&doc).unwrap(), "\\ft 'barki'nani\n");
        assert_eq!(emit_fosf(&FosfDocument::new(Template::Lexicon)).unwrap(), "");
    }

    #[test]
    fn emit_separates_records_with_one_blank_line() {
        let doc = doc_of(
            Template::Lexicon,
            vec![vec![("ft", "a"), ("fg", "b")], vec![("ft", "c")]],
        );
        let out = emit_fosf(&doc).unwrap();
        assert_eq!(out.lines().filter(|l| l.is_empty()).count(), 1);
        assert_eq!(out, "\\ft a\n\\fg b\n\n\\ft c\n");
    }

    #[test]
    fn emit_multiline_values_as_continuations() {
        let doc = doc_of(
            Template::Lexicon,
            vec![vec![("ft", "a"), ("ncft", "one\ntwo\n\\three")]],
        );
        let out = emit_fosf(&doc).unwrap();
        assert_eq!(out, "\\ft a\n\\ncft one\ntwo\n \\three\n");
        let back = parse_fosf(out.as_bytes(), Template::Lexicon).unwrap();
        assert_eq!(back.records[0].fields[1].value, "one two \\three");
        assert_eq!(back.fields().count(), 2);
    }

    #[test]
    fn emit_refuses_documents_with_errors() {
        let doc = parse_fosf(b"\\ft x\n\\fg a\n\\fg b", Template::Lexicon).unwrap();
        assert_eq!(emit_fosf(&doc).unwrap_err().code(), codes::E_INVALID);
    }
}
