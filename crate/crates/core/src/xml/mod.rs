//! XML serialization of archive texts.
//!
//! The layout mirrors the published Garrwa sample: no indentation, one
//! element per line, every tier element present (empty tiers self-close),
//! `lexical_item` units for lexicons and `text_unit` units for primary
//! text. Element text is trimmed on input and empty elements read as
//! absent tiers.
//!
//! Unit and text extensions and the optional metadata record have no
//! element in the grammar and are not serialized.

pub mod grammar;

use roxmltree::{Document, Node, ParsingOptions};

use crate::diagnostic::{decode_utf8, has_errors, Diagnostic, Error, Result};
use crate::model::{validate, Analysis, ArchiveText, MediaLink, Offset, SourceEntry, Speaker, TextKind, TextUnit};

pub use grammar::Grammar;

pub const XML_DECLARATION: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

pub(crate) fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

/// `<name attrs>value</name>` or `<name attrs/>` when the value is empty.
pub(crate) fn leaf(out: &mut String, name: &str, attrs: &[(&str, &str)], value: Option<&str>) {
    out.push('<');
    out.push_str(name);
    for (key, val) in attrs {
        out.push_str(&format!(" {key}=\"{}\"", escape_attr(val)));
    }
    match value.filter(|v| !v.is_empty()) {
        Some(v) => {
            out.push('>');
            out.push_str(&escape_text(v));
            out.push_str(&format!("</{name}>\n"));
        }
        None => out.push_str("/>\n"),
    }
}

/// Serialize a valid text. Equal models produce identical bytes.
pub fn to_xml(text: &ArchiveText) -> Result<String> {
    let diagnostics = validate(text);
    if has_errors(&diagnostics) {
        return Err(Error::invalid(&diagnostics).expect("errors present"));
    }
    let mut out = String::from(XML_DECLARATION);
    let kind = text.kind.as_str();
    if text.media.is_empty() && text.speakers.is_empty() && text.units.is_empty() {
        out.push_str(&format!("<text type=\"{kind}\"/>\n"));
        return Ok(out);
    }
    out.push_str(&format!("<text type=\"{kind}\">\n"));
    for link in &text.media {
        leaf(
            &mut out,
            "media",
            &[("format", &link.format), ("url", &link.url), ("comment", &link.comment)],
            None,
        );
    }
    for speaker in &text.speakers {
        leaf(&mut out, "speaker", &[("code", &speaker.code)], Some(&speaker.name));
    }
    for unit in &text.units {
        write_unit(&mut out, text.kind, unit);
    }
    out.push_str("</text>\n");
    Ok(out)
}

fn write_unit(out: &mut String, kind: TextKind, unit: &TextUnit) {
    let element = match kind {
        TextKind::Lexicon => "lexical_item",
        TextKind::PrimaryText => "text_unit",
    };
    let offset = unit.offset.map(|o| o.to_string());
    let mut attrs: Vec<(&str, &str)> = Vec::new();
    if let Some(o) = &offset {
        attrs.push(("offset", o));
    }
    match kind {
        TextKind::Lexicon => {
            if let Some(d) = &unit.syn_sem_domain {
                attrs.push(("syn_sem_domain_code", d));
            }
        }
        TextKind::PrimaryText => {
            if let Some(s) = &unit.speaker_code {
                attrs.push(("speaker_code", s));
            }
        }
    }
    out.push('<');
    out.push_str(element);
    for (k, v) in &attrs {
        out.push_str(&format!(" {k}=\"{}\"", escape_attr(v)));
    }
    out.push_str(">\n");

    let t = &unit.tiers;
    leaf(out, "flint_transcription", &[], Some(&t.flint_transcription));
    leaf(
        out,
        "flint_transcription_comment",
        &[],
        t.transcription_comment.as_deref(),
    );
    if kind == TextKind::Lexicon {
        if unit.other_recordings.is_empty() {
            leaf(out, "other_recordings", &[], None);
        }
        for rec in &unit.other_recordings {
            leaf(out, "other_recordings", &[], Some(rec));
        }
    }
    leaf(out, "recording_comment", &[], t.recording_comment.as_deref());
    leaf(out, "flint_gloss", &[], t.flint_gloss.as_deref());
    leaf(out, "flint_gloss_comment", &[], t.gloss_comment_flint.as_deref());
    leaf(out, "flint_free_translation", &[], t.free_translation.as_deref());
    leaf(
        out,
        "flint_free_translation_comment",
        &[],
        t.free_translation_comment.as_deref(),
    );
    if t.other_sources.is_empty() {
        out.push_str("<other_sources/>\n");
    } else {
        out.push_str("<other_sources>\n");
        for source in &t.other_sources {
            leaf(out, "source", &[], Some(&source.citation));
        }
        out.push_str("</other_sources>\n");
    }
    if t.other_sources_comment.is_empty() {
        leaf(out, "other_sources_comment", &[], None);
    }
    for comment in &t.other_sources_comment {
        leaf(out, "other_sources_comment", &[], Some(comment));
    }
    match &t.analysis {
        Some(Analysis {
            text,
            analyst_code: Some(code),
        }) => leaf(out, "analysis", &[("code", code)], Some(text)),
        Some(Analysis {
            text,
            analyst_code: None,
        }) => leaf(out, "analysis", &[], Some(text)),
        None => leaf(out, "analysis", &[], None),
    }
    leaf(out, "analysis_comment", &[], t.analysis_comment.as_deref());
    leaf(out, "gloss", &[], t.morpheme_gloss.as_deref());
    leaf(out, "gloss_comment", &[], t.morpheme_gloss_comment.as_deref());
    out.push_str(&format!("</{element}>\n"));
}

/// Reject inputs whose XML declaration names an encoding other than UTF-8.
fn check_declared_encoding(text: &str) -> Result<()> {
    let Some(decl) = text.strip_prefix("<?xml").and_then(|rest| rest.split("?>").next()) else {
        return Ok(());
    };
    let Some(at) = decl.find("encoding") else {
        return Ok(());
    };
    let rest = decl[at + "encoding".len()..].trim_start();
    let Some(rest) = rest.strip_prefix('=') else {
        return Ok(());
    };
    let rest = rest.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'');
    let declared = match quote {
        Some(q) => rest[1..].split(q).next().unwrap_or(""),
        None => return Ok(()),
    };
    if declared.eq_ignore_ascii_case("utf-8") || declared.eq_ignore_ascii_case("utf8") {
        Ok(())
    } else {
        Err(Error::DeclaredEncoding {
            declared: declared.to_string(),
        })
    }
}

/// Decode an XML document, honouring its declared encoding.
pub(crate) fn decode_document(input: &[u8]) -> Result<&str> {
    let text = decode_utf8(input)?;
    check_declared_encoding(text)?;
    Ok(text)
}

pub(crate) fn parse_tree(text: &str) -> Result<Document<'_>> {
    let options = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, options).map_err(|e| Error::Malformed {
        message: e.to_string(),
        line: e.pos().row as usize,
    })
}

/// Check well-formedness and grammar validity against [`Grammar::archive_text`].
pub fn validate_xml(input: &[u8]) -> Vec<Diagnostic> {
    validate_xml_with(input, &Grammar::archive_text())
}

/// Check well-formedness and validity against any grammar.
pub fn validate_xml_with(input: &[u8], grammar: &Grammar) -> Vec<Diagnostic> {
    let text = match decode_document(input) {
        Ok(text) => text,
        Err(e) => return vec![e.to_diagnostic()],
    };
    match parse_tree(text) {
        Ok(doc) => grammar.validate(&doc),
        Err(e) => vec![e.to_diagnostic()],
    }
}

/// Parse an archive text document. Inverse of [`to_xml`].
pub fn from_xml(input: &[u8]) -> Result<ArchiveText> {
    let doc = parse_tree(decode_document(input)?)?;
    if let Some(first) = Grammar::archive_text().validate(&doc).into_iter().next() {
        return Err(Error::Schema {
            message: first.message,
            line: first.line.unwrap_or(0),
        });
    }
    build_text(&doc)
}

fn content(node: Node) -> String {
    node.descendants()
        .filter(Node::is_text)
        .filter_map(|n| n.text())
        .collect::<String>()
        .trim()
        .to_string()
}

fn opt(node: Node) -> Option<String> {
    Some(content(node)).filter(|s| !s.is_empty())
}

fn line_of(doc: &Document, node: Node) -> usize {
    doc.text_pos_at(node.range().start).row as usize
}

fn build_text(doc: &Document) -> Result<ArchiveText> {
    let root = doc.root_element();
    let kind = match root.attribute("type") {
        Some("primary_text") => TextKind::PrimaryText,
        _ => TextKind::Lexicon,
    };
    let mut text = ArchiveText::new(kind);
    for child in root.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "media" => text.media.push(MediaLink {
                format: child.attribute("format").unwrap_or_default().to_string(),
                url: child.attribute("url").unwrap_or_default().to_string(),
                comment: child.attribute("comment").unwrap_or_default().to_string(),
            }),
            "speaker" => text.speakers.push(Speaker::new(
                child.attribute("code").unwrap_or_default(),
                content(child),
            )),
            _ => text.units.push(build_unit(doc, child)?),
        }
    }
    Ok(text)
}

fn build_unit(doc: &Document, node: Node) -> Result<TextUnit> {
    let mut unit = TextUnit::default();
    if let Some(offset) = node.attribute("offset") {
        unit.offset = Some(Offset::parse_at(offset, line_of(doc, node))?);
    }
    unit.syn_sem_domain = node
        .attribute("syn_sem_domain_code")
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().to_string());
    unit.speaker_code = node
        .attribute("speaker_code")
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().to_string());
    let t = &mut unit.tiers;
    for child in node.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "flint_transcription" => t.flint_transcription = content(child),
            "flint_transcription_comment" => t.transcription_comment = opt(child),
            "other_recordings" => unit.other_recordings.extend(opt(child)),
            "recording_comment" => t.recording_comment = opt(child),
            "flint_gloss" => t.flint_gloss = opt(child),
            "flint_gloss_comment" => t.gloss_comment_flint = opt(child),
            "flint_free_translation" => t.free_translation = opt(child),
            "flint_free_translation_comment" => t.free_translation_comment = opt(child),
            "other_sources" => t.other_sources.extend(
                child
                    .children()
                    .filter(Node::is_element)
                    .filter_map(opt)
                    .map(SourceEntry::new),
            ),
            "other_sources_comment" => t.other_sources_comment.extend(opt(child)),
            "analysis" => {
                let code = child.attribute("code").filter(|c| !c.is_empty()).map(str::to_string);
                let body = content(child);
                if code.is_some() || !body.is_empty() {
                    t.analysis = Some(Analysis {
                        text: body,
                        analyst_code: code,
                    });
                }
            }
            "analysis_comment" => t.analysis_comment = opt(child),
            "gloss" => t.morpheme_gloss = opt(child),
            "gloss_comment" => t.morpheme_gloss_comment = opt(child),
            _ => {}
        }
    }
    Ok(unit)
}

/// Well-formedness check for generic markup such as rendered hypertext.
pub fn check_well_formed(input: &str) -> Result<()> {
    parse_tree(input).map(|_| ())
}
