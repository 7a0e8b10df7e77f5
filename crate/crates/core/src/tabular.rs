//! Delimited tables exported from spreadsheet data entry.
//!
//! The first row is the header. Columns map to model slots by label: the
//! FOSF marker (`ft`), the model field name (`flint_transcription`) or the
//! XML element name (`flint_gloss_comment`), compared case-insensitively.
//! Sources repeat across suffixed columns `os1`, `os2`, ...

use std::fmt;

use crate::diagnostic::{codes, decode_utf8, Diagnostic, Error, Outcome, Result};
use crate::model::{validate, Analysis, ArchiveText, Offset, SourceEntry, Speaker, TextKind, TextUnit};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    /// Every row has exactly `header.len()` cells.
    pub rows: Vec<Vec<String>>,
    /// Source line of each row, for diagnostics.
    pub row_lines: Vec<usize>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table {
            header,
            ..Default::default()
        }
    }

    /// Append a row as if it were the next source line. The caller keeps it rectangular.
    pub fn push_row(&mut self, row: Vec<String>) {
        let line = self.row_lines.last().map_or(2, |l| l + 1);
        self.rows.push(row);
        self.row_lines.push(line);
    }
}

/// Read a comma- or tab-delimited table.
///
/// Double-quote quoting with doubled-quote escapes is honoured. Cells are
/// trimmed; blank lines are skipped. Rows shorter than the header are
/// padded with empty cells and reported; longer rows are rejected.
pub fn parse_table(input: &[u8], delimiter: char) -> Result<Outcome<Table>> {
    if delimiter != ',' && delimiter != '\t' {
        return Err(Error::Delimiter(delimiter));
    }
    let text = decode_utf8(input)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter as u8)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut table = Table::default();
    let mut diagnostics = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Malformed {
            message: e.to_string(),
            line: e.position().map_or(0, |p| p.line() as usize),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut cells: Vec<String> = record.iter().map(|c| c.trim().to_string()).collect();
        if first {
            table.header = cells;
            first = false;
            continue;
        }
        let expected = table.header.len();
        if cells.len() > expected {
            return Err(Error::Ragged {
                cells: cells.len(),
                expected,
                line,
            });
        }
        if cells.len() < expected {
            diagnostics.push(
                Diagnostic::warning(
                    codes::W_SHORT_ROW,
                    format!("row has {} of {expected} cells; padded with empty cells", cells.len()),
                )
                .at(line),
            );
            cells.resize(expected, String::new());
        }
        table.rows.push(cells);
        table.row_lines.push(line);
    }
    Ok(Outcome::new(table, diagnostics))
}

/// A model slot a column can fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    FlintTranscription,
    TranscriptionComment,
    RecordingComment,
    FlintGloss,
    GlossCommentFlint,
    FreeTranslation,
    FreeTranslationComment,
    OtherSource,
    OtherSourcesComment,
    Analysis,
    Analyst,
    AnalysisComment,
    MorphemeGloss,
    MorphemeGlossComment,
    Offset,
    SpeakerCode,
    SynSemDomain,
    OtherRecordings,
}

impl Slot {
    pub const ALL: [Slot; 18] = [
        Slot::FlintTranscription,
        Slot::TranscriptionComment,
        Slot::RecordingComment,
        Slot::FlintGloss,
        Slot::GlossCommentFlint,
        Slot::FreeTranslation,
        Slot::FreeTranslationComment,
        Slot::OtherSource,
        Slot::OtherSourcesComment,
        Slot::Analysis,
        Slot::Analyst,
        Slot::AnalysisComment,
        Slot::MorphemeGloss,
        Slot::MorphemeGlossComment,
        Slot::Offset,
        Slot::SpeakerCode,
        Slot::SynSemDomain,
        Slot::OtherRecordings,
    ];

    pub fn marker(self) -> &'static str {
        match self {
            Slot::FlintTranscription => "ft",
            Slot::TranscriptionComment => "ncft",
            Slot::RecordingComment => "ncr",
            Slot::FlintGloss => "fg",
            Slot::GlossCommentFlint => "ncfg",
            Slot::FreeTranslation => "fft",
            Slot::FreeTranslationComment => "ncfft",
            Slot::OtherSource => "os",
            Slot::OtherSourcesComment => "ncos",
            Slot::Analysis => "na",
            Slot::Analyst => "analyst",
            Slot::AnalysisComment => "ncna",
            Slot::MorphemeGloss => "ng",
            Slot::MorphemeGlossComment => "ncng",
            Slot::Offset => "offset",
            Slot::SpeakerCode => "sp",
            Slot::SynSemDomain => "sd",
            Slot::OtherRecordings => "or",
        }
    }

    /// Model field name.
    pub fn name(self) -> &'static str {
        match self {
            Slot::FlintTranscription => "flint_transcription",
            Slot::TranscriptionComment => "transcription_comment",
            Slot::RecordingComment => "recording_comment",
            Slot::FlintGloss => "flint_gloss",
            Slot::GlossCommentFlint => "gloss_comment_flint",
            Slot::FreeTranslation => "free_translation",
            Slot::FreeTranslationComment => "free_translation_comment",
            Slot::OtherSource => "other_sources",
            Slot::OtherSourcesComment => "other_sources_comment",
            Slot::Analysis => "analysis",
            Slot::Analyst => "analyst_code",
            Slot::AnalysisComment => "analysis_comment",
            Slot::MorphemeGloss => "morpheme_gloss",
            Slot::MorphemeGlossComment => "morpheme_gloss_comment",
            Slot::Offset => "offset",
            Slot::SpeakerCode => "speaker_code",
            Slot::SynSemDomain => "syn_sem_domain",
            Slot::OtherRecordings => "other_recordings",
        }
    }

    /// Further accepted labels, mostly XML element and attribute names.
    fn aliases(self) -> &'static [&'static str] {
        match self {
            Slot::TranscriptionComment => &["flint_transcription_comment"],
            Slot::GlossCommentFlint => &["flint_gloss_comment"],
            Slot::FreeTranslation => &["flint_free_translation"],
            Slot::FreeTranslationComment => &["flint_free_translation_comment"],
            Slot::OtherSource => &["source"],
            Slot::Analyst => &["code"],
            Slot::MorphemeGloss => &["gloss"],
            Slot::MorphemeGlossComment => &["gloss_comment"],
            Slot::SynSemDomain => &["syn_sem_domain_code"],
            _ => &[],
        }
    }

    pub fn is_repeatable(self) -> bool {
        self == Slot::OtherSource
    }

    pub fn allowed_in(self, kind: TextKind) -> bool {
        match self {
            Slot::SpeakerCode => kind == TextKind::PrimaryText,
            Slot::SynSemDomain | Slot::OtherRecordings => kind == TextKind::Lexicon,
            _ => true,
        }
    }

    /// Slot named by a column label, if any.
    pub fn from_label(label: &str) -> Option<Slot> {
        let norm: String = label
            .trim()
            .to_lowercase()
            .chars()
            .map(|c| if c == ' ' || c == '-' { '_' } else { c })
            .collect();
        let matches = |s: &str| {
            Slot::ALL
                .into_iter()
                .find(|slot| slot.marker() == s || slot.name() == s || slot.aliases().contains(&s))
        };
        if let Some(slot) = matches(&norm) {
            return Some(slot);
        }
        let stem = norm.trim_end_matches(|c: char| c.is_ascii_digit());
        if stem.len() < norm.len() {
            let stem = stem.strip_suffix('_').unwrap_or(stem);
            return matches(stem).filter(|slot| slot.is_repeatable());
        }
        None
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Column index to slot assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    entries: Vec<(usize, Slot)>,
}

impl ColumnMap {
    /// Build a map from explicit assignments. Only [`Slot::OtherSource`] may
    /// repeat, and some column must fill the transcription.
    pub fn new(mut entries: Vec<(usize, Slot)>) -> Result<Self> {
        entries.sort();
        entries.dedup_by_key(|e| e.0);
        let mut seen = Vec::new();
        for &(_, slot) in &entries {
            if !slot.is_repeatable() && seen.contains(&slot) {
                return Err(Error::DuplicateSlot {
                    slot: slot.name().to_string(),
                });
            }
            seen.push(slot);
        }
        if !seen.contains(&Slot::FlintTranscription) {
            return Err(Error::NoTranscription);
        }
        Ok(ColumnMap { entries })
    }

    pub fn entries(&self) -> &[(usize, Slot)] {
        &self.entries
    }

    pub fn slot(&self, column: usize) -> Option<Slot> {
        self.entries.iter().find(|e| e.0 == column).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Map header labels to slots. Unrecognised labels are reported, not mapped.
pub fn infer_column_map(header: &[String]) -> Result<Outcome<ColumnMap>> {
    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    for (index, label) in header.iter().enumerate() {
        match Slot::from_label(label) {
            Some(slot) => entries.push((index, slot)),
            None => diagnostics.push(
                Diagnostic::warning(
                    codes::W_UNMAPPED_COLUMN,
                    format!("column {:?} matches no slot and is ignored", label),
                )
                .at(1),
            ),
        }
    }
    Ok(Outcome::new(ColumnMap::new(entries)?, diagnostics))
}

/// One unit per row, in row order. Empty cells are absent tiers.
pub fn table_to_text(table: &Table, map: &ColumnMap, kind: TextKind) -> Result<Outcome<ArchiveText>> {
    if let Some(&(_, slot)) = map.entries.iter().find(|(_, s)| !s.allowed_in(kind)) {
        return Err(Error::KindSlot {
            slot: slot.name().to_string(),
            kind: kind.as_str().to_string(),
        });
    }
    let mut text = ArchiveText::new(kind);
    let mut diagnostics = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let line = table.row_lines.get(i).copied().unwrap_or(i + 2);
        let unit = row_to_unit(row, map, line)?;
        if let Some(code) = &unit.speaker_code {
            if text.speaker(code).is_none() {
                diagnostics.push(
                    Diagnostic::warning(
                        codes::W_UNRESOLVED_SPEAKER,
                        format!("speaker {code} is not declared; declared with an empty name"),
                    )
                    .at(line),
                );
                text.speakers.push(Speaker::new(code.clone(), ""));
            }
        }
        text.units.push(unit);
    }
    diagnostics.extend(validate(&text));
    Ok(Outcome::new(text, diagnostics))
}

fn row_to_unit(row: &[String], map: &ColumnMap, line: usize) -> Result<TextUnit> {
    let mut unit = TextUnit::default();
    for &(column, slot) in &map.entries {
        let Some(cell) = row.get(column).map(|c| c.trim()).filter(|c| !c.is_empty()) else {
            continue;
        };
        let value = cell.to_string();
        let t = &mut unit.tiers;
        match slot {
            Slot::FlintTranscription => t.flint_transcription = value,
            Slot::TranscriptionComment => t.transcription_comment = Some(value),
            Slot::RecordingComment => t.recording_comment = Some(value),
            Slot::FlintGloss => t.flint_gloss = Some(value),
            Slot::GlossCommentFlint => t.gloss_comment_flint = Some(value),
            Slot::FreeTranslation => t.free_translation = Some(value),
            Slot::FreeTranslationComment => t.free_translation_comment = Some(value),
            Slot::OtherSource => t.other_sources.push(SourceEntry::new(value)),
            Slot::OtherSourcesComment => t.other_sources_comment.push(value),
            Slot::Analysis => t.analysis.get_or_insert_with(Analysis::default).text = value,
            Slot::Analyst => t.analysis.get_or_insert_with(Analysis::default).analyst_code = Some(value),
            Slot::AnalysisComment => t.analysis_comment = Some(value),
            Slot::MorphemeGloss => t.morpheme_gloss = Some(value),
            Slot::MorphemeGlossComment => t.morpheme_gloss_comment = Some(value),
            Slot::Offset => unit.offset = Some(Offset::parse_at(&value, line)?),
            Slot::SpeakerCode => unit.speaker_code = Some(value),
            Slot::SynSemDomain => unit.syn_sem_domain = Some(value),
            Slot::OtherRecordings => unit.other_recordings.push(value),
        }
    }
    Ok(unit)
}

/// Parse, map by header and convert in one step.
pub fn import_table(input: &[u8], delimiter: char, kind: TextKind) -> Result<Outcome<ArchiveText>> {
    let parsed = parse_table(input, delimiter)?;
    let map = infer_column_map(&parsed.value.header)?;
    let converted = table_to_text(&parsed.value, &map.value, kind)?;
    let mut diagnostics = parsed.diagnostics;
    diagnostics.extend(map.diagnostics);
    diagnostics.extend(converted.diagnostics);
    Ok(Outcome::new(converted.value, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn simple_table() {
        let table = parse_table(b"ft,fg\n'barki'nani,bad", ',').unwrap();
        assert!(table.diagnostics.is_empty());
        assert_eq!(table.value.header, labels(&["ft", "fg"]));
        assert_eq!(table.value.rows, vec![labels(&["'barki'nani", "bad"])]);
        assert_eq!(table.value.row_lines, vec![2]);
    }

    #[test]
    fn header_only() {
        let table = parse_table(b"ft,fg\n", ',').unwrap().value;
        assert!(table.rows.is_empty());
    }

    #[test]
    fn quoting() {
        let table = parse_table(b"ft,fg\n\"a,b\",\"say \"\"x\"\"\"", ',').unwrap().value;
        assert_eq!(table.rows[0], labels(&["a,b", "say \"x\""]));
    }

    #[test]
    fn tabs_and_trimming() {
        let table = parse_table(b"ft\tfg\n  a  b \t c\n", '\t').unwrap().value;
        assert_eq!(table.rows[0], labels(&["a  b", "c"]));
    }

    #[test]
    fn short_and_long_rows() {
        let out = parse_table(b"ft,fg,sd\na\nb,c,d\n", ',').unwrap();
        assert_eq!(out.value.rows[0], labels(&["a", "", ""]));
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].code, codes::W_SHORT_ROW);
        assert_eq!(out.diagnostics[0].line, Some(2));

        let err = parse_table(b"ft\na,b\n", ',').unwrap_err();
        assert_eq!(err.code(), codes::E_RAGGED);
        assert_eq!(err.line(), Some(2));
    }

    #[test]
    fn bad_input() {
        assert_eq!(parse_table(b"ft\n\xff", ',').unwrap_err().code(), codes::E_ENCODING);
        assert_eq!(parse_table(b"ft", ';').unwrap_err().code(), codes::E_DELIMITER);
    }

    #[test]
    fn column_inference() {
        let map = infer_column_map(&labels(&["ft", "fg", "sd"])).unwrap();
        assert_eq!(map.value.len(), 3);
        assert!(map.diagnostics.is_empty());

        let map = infer_column_map(&labels(&["flint_gloss", "ft"])).unwrap().value;
        assert_eq!(map.entries(), &[(0, Slot::FlintGloss), (1, Slot::FlintTranscription)]);

        let map = infer_column_map(&labels(&["ft", "banana"])).unwrap();
        assert_eq!(map.value.len(), 1);
        assert_eq!(map.diagnostics.len(), 1);
        assert_eq!(map.diagnostics[0].code, codes::W_UNMAPPED_COLUMN);
    }

    #[test]
    fn label_forms() {
        assert_eq!(Slot::from_label("FT"), Some(Slot::FlintTranscription));
        assert_eq!(Slot::from_label("Flint Free Translation"), Some(Slot::FreeTranslation));
        assert_eq!(Slot::from_label("os1"), Some(Slot::OtherSource));
        assert_eq!(Slot::from_label("other_sources_12"), Some(Slot::OtherSource));
        assert_eq!(Slot::from_label("fg2"), None);
        assert_eq!(Slot::from_label("syn_sem_domain_code"), Some(Slot::SynSemDomain));
    }

    #[test]
    fn map_errors() {
        assert_eq!(
            infer_column_map(&labels(&["fg"])).unwrap_err().code(),
            codes::E_NO_TRANSCRIPTION
        );
        assert_eq!(infer_column_map(&[]).unwrap_err().code(), codes::E_NO_TRANSCRIPTION);
        assert_eq!(
            infer_column_map(&labels(&["ft", "fg", "flint_gloss"]))
                .unwrap_err()
                .code(),
            codes::E_DUP_SLOT
        );
        assert!(infer_column_map(&labels(&["ft", "os1", "os2", "os"])).is_ok());
    }

    #[test]
    fn one_row_lexicon() {
        let out = import_table(b"ft,fg\n'barki'nani,bad", ',', TextKind::Lexicon).unwrap();
        assert!(out.diagnostics.is_empty());
        let mut unit = TextUnit::new("'barki'nani");
        unit.tiers.flint_gloss = Some("bad".into());
        assert_eq!(out.value.units, vec![unit]);
    }

    #[test]
    fn zero_rows() {
        let out = import_table(b"ft,fg\n", ',', TextKind::Lexicon).unwrap();
        assert!(out.value.units.is_empty());
    }

    #[test]
    fn offsets() {
        let out = import_table(b"ft,offset\na,0.00\nb,3.50\n", ',', TextKind::Lexicon).unwrap();
        let offsets: Vec<_> = out.value.units.iter().map(|u| u.offset.unwrap().centis()).collect();
        assert_eq!(offsets, vec![0, 350]);
        assert!(out.diagnostics.is_empty());

        let err = import_table(b"ft,offset\na,-1\n", ',', TextKind::Lexicon).unwrap_err();
        assert_eq!(err.code(), codes::E_BAD_OFFSET);
        assert_eq!(err.line(), Some(2));
    }

    #[test]
    fn kind_slots() {
        let err = import_table(b"ft,sd\na,adj\n", ',', TextKind::PrimaryText).unwrap_err();
        assert_eq!(err.code(), codes::E_KIND_SLOT);
        let err = import_table(b"ft,sp\na,G\n", ',', TextKind::Lexicon).unwrap_err();
        assert_eq!(err.code(), codes::E_KIND_SLOT);
    }

    #[test]
    fn speakers_are_declared() {
        let out = import_table(b"sp,ft\nG,a\nG,b\n", ',', TextKind::PrimaryText).unwrap();
        assert_eq!(out.value.speakers, vec![Speaker::new("G", "")]);
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].code, codes::W_UNRESOLVED_SPEAKER);
    }

    #[test]
    fn repeated_sources_keep_column_order() {
        let out = import_table(b"ft,os1,os2,os3\na,x,,z\n", ',', TextKind::Lexicon).unwrap();
        let sources: Vec<_> = out.value.units[0]
            .tiers
            .other_sources
            .iter()
            .map(|s| s.citation.as_str())
            .collect();
        assert_eq!(sources, vec!["x", "z"]);
    }
}
