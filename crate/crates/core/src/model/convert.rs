//! Conversion between parsed FOSF documents and the model.

use crate::diagnostic::{codes, has_errors, Diagnostic, Error, Outcome, Result};
use crate::fosf::{validate_markers, write_field, FosfDocument, RawField, RawRecord, RecordKind, Template};

use super::{
    validate, Analysis, ArchiveText, DocumentNumber, Extension, MediaLink, MetadataRecord, Offset, RecordingDate,
    SourceEntry, Speaker, TextKind, TextUnit,
};

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Converted {
    Text(ArchiveText),
    Metadata(Vec<MetadataRecord>),
}

/// Convert a parsed document into the model.
///
/// Metadata documents yield one [`MetadataRecord`] per record; lexicon and
/// primary-text documents yield an [`ArchiveText`] of the matching kind.
/// Fields with no dedicated slot are kept as extensions.
pub fn from_fosf(doc: &FosfDocument) -> Result<Outcome<Converted>> {
    let mut checked = doc.diagnostics.clone();
    checked.extend(validate_markers(doc));
    if let Some(err) = Error::invalid(&checked) {
        return Err(err);
    }
    match doc.template {
        Template::Metadata => Ok(convert_metadata(doc)?.map(Converted::Metadata)),
        Template::Lexicon | Template::PrimaryText => Ok(convert_text(doc)?.map(Converted::Text)),
    }
}

/// [`from_fosf`] for documents known to be lexicon or primary text.
pub fn text_from_fosf(doc: &FosfDocument) -> Result<Outcome<ArchiveText>> {
    match doc.template {
        Template::Metadata => Err(Error::Kind {
            expected: "lexicon or primary_text".into(),
            found: "metadata".into(),
        }),
        _ => Ok(from_fosf(doc)?.map(|c| match c {
            Converted::Text(text) => text,
            Converted::Metadata(_) => unreachable!("text template yields a text"),
        })),
    }
}

/// [`from_fosf`] for metadata documents.
pub fn metadata_from_fosf(doc: &FosfDocument) -> Result<Outcome<Vec<MetadataRecord>>> {
    match doc.template {
        Template::Metadata => Ok(from_fosf(doc)?.map(|c| match c {
            Converted::Metadata(records) => records,
            Converted::Text(_) => unreachable!("metadata template yields records"),
        })),
        other => Err(Error::Kind {
            expected: "metadata".into(),
            found: other.name().into(),
        }),
    }
}

/// Read `Name (CODE)`. Without a parenthesised code the first letter of the
/// name is used and a warning is returned.
pub fn parse_speaker(value: &str, line: usize) -> (Speaker, Option<Diagnostic>) {
    let value = value.trim();
    if let Some(open) = value.rfind('(') {
        if let Some(inner) = value[open + 1..].strip_suffix(')') {
            let code = inner.trim();
            if !code.is_empty() && !code.contains(char::is_whitespace) && !code.contains('(') {
                return (Speaker::new(code, value[..open].trim()), None);
            }
        }
    }
    let code: String = value
        .chars()
        .find(|c| c.is_alphanumeric())
        .map(|c| c.to_uppercase().collect())
        .unwrap_or_default();
    let warning = Diagnostic::warning(
        codes::W_SPEAKER_CODE,
        format!("speaker {value:?} has no (CODE); using {code:?}"),
    )
    .at(line);
    (Speaker::new(code, value), Some(warning))
}

fn parse_media(value: &str) -> MediaLink {
    let dash = |s: &str| if s == "-" { String::new() } else { s.to_string() };
    let value = value.trim();
    let (format, rest) = value.split_once(char::is_whitespace).unwrap_or((value, ""));
    let rest = rest.trim_start();
    let (url, comment) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    MediaLink {
        format: dash(format),
        url: dash(url),
        comment: comment.trim().to_string(),
    }
}

fn media_value(link: &MediaLink) -> String {
    let dash = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
    let mut out = format!("{} {}", dash(&link.format), dash(&link.url));
    if !link.comment.is_empty() {
        out.push(' ');
        out.push_str(&link.comment);
    }
    out
}

/// Apply one metadata-template field to a record under construction.
/// Returns false when the marker is not a metadata slot.
fn apply_metadata_field(
    record: &mut MetadataRecord,
    field: &RawField,
    diagnostics: &mut Vec<Diagnostic>,
) -> Result<bool> {
    let value = field.value.as_str();
    let text = || Some(value.to_string());
    match field.name() {
        "dn" => record.document_number = DocumentNumber::parse_at(value, field.line)?,
        "cr" => {
            for part in value.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
                for piece in part.split_whitespace() {
                    record.cross_refs.push(DocumentNumber::parse_at(piece, field.line)?);
                }
            }
        }
        "fl" => record.tape_log = text(),
        "an" => record.aiatsis_acquisition = text(),
        "cm" => record.aiatsis_tape_ref = text(),
        "cd" => record.aiatsis_cdrom_ref = text(),
        "gp" => record.group_number = text(),
        "lg" => record.language_name = text(),
        "loc" => record.location = text(),
        "da" => record.date = Some(RecordingDate::new(value)),
        "o" => record.observer = text(),
        "snc" => {
            let (speaker, warning) = parse_speaker(value, field.line);
            diagnostics.extend(warning);
            record.speakers.push(speaker);
        }
        _ => return Ok(false),
    }
    Ok(true)
}

fn convert_metadata(doc: &FosfDocument) -> Result<Outcome<Vec<MetadataRecord>>> {
    let mut diagnostics = Vec::new();
    let mut records: Vec<MetadataRecord> = Vec::new();
    let mut orphans: Vec<Extension> = Vec::new();
    for raw in &doc.records {
        if raw.kind == RecordKind::Preamble {
            orphans.extend(
                raw.fields
                    .iter()
                    .filter(|f| !f.value.is_empty())
                    .map(|f| Extension::new(f.name(), f.value.clone())),
            );
            continue;
        }
        let head = &raw.fields[0];
        let mut record = MetadataRecord::new(DocumentNumber::parse_at(&head.value, head.line)?);
        for field in raw.fields.iter().skip(1).filter(|f| !f.value.is_empty()) {
            if !apply_metadata_field(&mut record, field, &mut diagnostics)? {
                record
                    .extensions
                    .push(Extension::new(field.name(), field.value.clone()));
            }
        }
        if records.is_empty() {
            record.extensions.splice(0..0, orphans.drain(..));
        }
        diagnostics.extend(record.validate().into_iter().map(|d| d.at(head.line)));
        records.push(record);
    }
    Ok(Outcome::new(records, diagnostics))
}

fn convert_text(doc: &FosfDocument) -> Result<Outcome<ArchiveText>> {
    let kind = match doc.template {
        Template::PrimaryText => TextKind::PrimaryText,
        _ => TextKind::Lexicon,
    };
    let mut text = ArchiveText::new(kind);
    let mut diagnostics = Vec::new();

    for raw in &doc.records {
        match raw.kind {
            RecordKind::Preamble => apply_preamble(&mut text, raw, &mut diagnostics)?,
            RecordKind::Entry => {
                let unit = convert_unit(kind, raw)?;
                if let Some(code) = &unit.speaker_code {
                    if text.speaker(code).is_none() {
                        diagnostics.push(
                            Diagnostic::warning(
                                codes::W_UNRESOLVED_SPEAKER,
                                format!("speaker {code} is not declared; declared with an empty name"),
                            )
                            .at(raw.fields[0].line),
                        );
                        text.speakers.push(Speaker::new(code.clone(), ""));
                    }
                }
                text.units.push(unit);
            }
        }
    }
    diagnostics.extend(validate(&text));
    Ok(Outcome::new(text, diagnostics))
}

fn apply_preamble(text: &mut ArchiveText, raw: &RawRecord, diagnostics: &mut Vec<Diagnostic>) -> Result<()> {
    let mut metadata: Option<MetadataRecord> = None;
    let mut pending: Vec<&RawField> = Vec::new();
    for field in raw.fields.iter().filter(|f| !f.value.is_empty()) {
        match field.name() {
            "media" => text.media.push(parse_media(&field.value)),
            "snc" => {
                let (speaker, warning) = parse_speaker(&field.value, field.line);
                diagnostics.extend(warning);
                if let Some(meta) = metadata.as_mut() {
                    meta.speakers.push(speaker.clone());
                }
                text.speakers.push(speaker);
            }
            "dn" => {
                let mut meta = MetadataRecord::new(DocumentNumber::parse_at(&field.value, field.line)?);
                meta.speakers = text.speakers.clone();
                for earlier in pending.drain(..) {
                    apply_metadata_field(&mut meta, earlier, diagnostics)?;
                }
                metadata = Some(meta);
            }
            name if crate::fosf::METADATA_MARKERS.contains(&name) => match metadata.as_mut() {
                Some(meta) => {
                    apply_metadata_field(meta, field, diagnostics)?;
                }
                None => pending.push(field),
            },
            _ => text.extensions.push(Extension::new(field.name(), field.value.clone())),
        }
    }
    if !pending.is_empty() {
        diagnostics.push(
            Diagnostic::warning(
                codes::W_NO_DOCNUM,
                "metadata fields in the preamble without \\dn; kept as extensions",
            )
            .at(pending[0].line),
        );
        text.extensions
            .extend(pending.into_iter().map(|f| Extension::new(f.name(), f.value.clone())));
    }
    if let Some(meta) = metadata {
        text.metadata = Some(meta);
    }
    Ok(())
}

fn convert_unit(kind: TextKind, raw: &RawRecord) -> Result<TextUnit> {
    let mut unit = TextUnit::default();
    for field in raw.fields.iter().filter(|f| !f.value.is_empty()) {
        let value = field.value.clone();
        let tiers = &mut unit.tiers;
        match (field.name(), kind) {
            ("ft", _) => tiers.flint_transcription = value,
            ("ncft", _) => tiers.transcription_comment = Some(value),
            ("ncr", _) => tiers.recording_comment = Some(value),
            ("fg", _) => tiers.flint_gloss = Some(value),
            ("ncfg", _) => tiers.gloss_comment_flint = Some(value),
            ("fft", _) => tiers.free_translation = Some(value),
            ("ncfft", _) => tiers.free_translation_comment = Some(value),
            ("os", _) => tiers.other_sources.push(SourceEntry::new(value)),
            ("ncos", _) => tiers.other_sources_comment.push(value),
            ("na", _) => tiers.analysis.get_or_insert_with(Analysis::default).text = value,
            ("analyst", _) => tiers.analysis.get_or_insert_with(Analysis::default).analyst_code = Some(value),
            ("ncna", _) => tiers.analysis_comment = Some(value),
            ("ng", _) => tiers.morpheme_gloss = Some(value),
            ("ncng", _) => tiers.morpheme_gloss_comment = Some(value),
            ("offset", _) => unit.offset = Some(Offset::parse_at(&value, field.line)?),
            ("sp", TextKind::PrimaryText) => unit.speaker_code = Some(value),
            ("sd", TextKind::Lexicon) => unit.syn_sem_domain = Some(value),
            ("or", TextKind::Lexicon) => unit.other_recordings.push(value),
            (name, _) => unit.extensions.push(Extension::new(name, value)),
        }
    }
    Ok(unit)
}

/// Render a text back into a FOSF document in canonical field order.
///
/// Metadata markers, speakers and media go to a preamble. Units follow in
/// order: `sp`, `ft`, `offset`, `sd`, `ncft`, `or`, `ncr`, `fg`, `ncfg`,
/// `fft`, `ncfft`, `os`, `ncos`, `na`, `analyst`, `ncna`, `ng`, `ncng`, then
/// extensions. A primary text in which only some units name a speaker has
/// no delimitable FOSF form and is rejected.
pub fn text_to_fosf(text: &ArchiveText) -> Result<FosfDocument> {
    let diagnostics = validate(text);
    if has_errors(&diagnostics) {
        return Err(Error::invalid(&diagnostics).expect("errors present"));
    }
    let template = match text.kind {
        TextKind::Lexicon => Template::Lexicon,
        TextKind::PrimaryText => Template::PrimaryText,
    };
    let with_speaker = text.units.iter().filter(|u| u.speaker_code.is_some()).count();
    if with_speaker != 0 && with_speaker != text.units.len() {
        return Err(Error::Invalid {
            count: 1,
            first: "primary text mixes units with and without speaker codes".into(),
        });
    }

    let mut builder = RecordBuilder::new(template);
    if let Some(meta) = &text.metadata {
        builder.push("dn", meta.document_number.to_string());
        for cr in &meta.cross_refs {
            builder.push("cr", cr.to_string());
        }
        for (marker, value) in [
            ("fl", &meta.tape_log),
            ("an", &meta.aiatsis_acquisition),
            ("cm", &meta.aiatsis_tape_ref),
            ("cd", &meta.aiatsis_cdrom_ref),
            ("gp", &meta.group_number),
            ("lg", &meta.language_name),
            ("loc", &meta.location),
        ] {
            builder.push_opt(marker, value.as_deref());
        }
        builder.push_opt("da", meta.date.as_ref().map(|d| d.verbatim.as_str()));
        builder.push_opt("o", meta.observer.as_deref());
    }
    for speaker in &text.speakers {
        builder.push("snc", speaker.to_string());
    }
    for link in &text.media {
        builder.push("media", media_value(link));
    }
    for ext in &text.extensions {
        builder.push(&ext.marker, ext.value.clone());
    }
    builder.finish(RecordKind::Preamble);

    for unit in &text.units {
        let t = &unit.tiers;
        builder.push_opt("sp", unit.speaker_code.as_deref());
        builder.push("ft", t.flint_transcription.clone());
        builder.push_opt("offset", unit.offset.map(|o| o.to_string()).as_deref());
        builder.push_opt("sd", unit.syn_sem_domain.as_deref());
        builder.push_opt("ncft", t.transcription_comment.as_deref());
        for rec in &unit.other_recordings {
            builder.push("or", rec.clone());
        }
        builder.push_opt("ncr", t.recording_comment.as_deref());
        builder.push_opt("fg", t.flint_gloss.as_deref());
        builder.push_opt("ncfg", t.gloss_comment_flint.as_deref());
        builder.push_opt("fft", t.free_translation.as_deref());
        builder.push_opt("ncfft", t.free_translation_comment.as_deref());
        for source in &t.other_sources {
            builder.push("os", source.citation.clone());
        }
        for comment in &t.other_sources_comment {
            builder.push("ncos", comment.clone());
        }
        if let Some(analysis) = &t.analysis {
            builder.push_opt("na", Some(analysis.text.as_str()));
            builder.push_opt("analyst", analysis.analyst_code.as_deref());
        }
        builder.push_opt("ncna", t.analysis_comment.as_deref());
        builder.push_opt("ng", t.morpheme_gloss.as_deref());
        builder.push_opt("ncng", t.morpheme_gloss_comment.as_deref());
        for ext in &unit.extensions {
            builder.push(&ext.marker, ext.value.clone());
        }
        builder.finish(RecordKind::Entry);
    }
    Ok(builder.doc)
}

/// Builds records with line numbers matching their canonical emission.
struct RecordBuilder {
    doc: FosfDocument,
    current: Vec<RawField>,
    line: usize,
}

impl RecordBuilder {
    fn new(template: Template) -> Self {
        RecordBuilder {
            doc: FosfDocument::new(template),
            current: Vec::new(),
            line: 1,
        }
    }

    fn push(&mut self, marker: &str, value: String) {
        let field = RawField::new(marker, value, self.doc.template, self.line);
        let mut rendered = String::new();
        write_field(&mut rendered, marker, &field.value);
        self.line += rendered.lines().count();
        self.current.push(field);
    }

    fn push_opt(&mut self, marker: &str, value: Option<&str>) {
        if let Some(value) = value.filter(|v| !v.is_empty()) {
            self.push(marker, value.to_string());
        }
    }

    fn finish(&mut self, kind: RecordKind) {
        if self.current.is_empty() {
            return;
        }
        self.doc.records.push(RawRecord {
            kind,
            fields: std::mem::take(&mut self.current),
        });
        // blank separator line
        self.line += 1;
    }
}
