//! The unified interlinear model.
//!
//! Lexicon entries and primary-text lines share one unit type; the
//! [`TextKind`] on the enclosing [`ArchiveText`] decides which of the few
//! kind-specific fields are legal. A lexical entry is simply a unit that
//! may carry a semantic/syntactic domain and other-recording references
//! and has no speaker.

mod convert;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::diagnostic::{codes, Diagnostic, Error, Result};

pub use convert::{from_fosf, metadata_from_fosf, parse_speaker, text_from_fosf, text_to_fosf, Converted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TextKind {
    Lexicon,
    PrimaryText,
}

impl TextKind {
    /// Attribute value used in the XML `type` attribute and in OLAC type elements.
    pub fn as_str(self) -> &'static str {
        match self {
            TextKind::Lexicon => "lexicon",
            TextKind::PrimaryText => "primary_text",
        }
    }
}

impl fmt::Display for TextKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TextKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lexicon" => Ok(TextKind::Lexicon),
            "primary_text" | "text" => Ok(TextKind::PrimaryText),
            other => Err(format!("unknown text kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Speaker {
    pub code: String,
    pub name: String,
}

impl Speaker {
    pub fn new(code: impl Into<String>, name: impl Into<String>) -> Self {
        Speaker {
            code: code.into(),
            name: name.into(),
        }
    }
}

/// `Name (CODE)`, or `(CODE)` for a speaker without a recorded name.
impl fmt::Display for Speaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() {
            write!(f, "({})", self.code)
        } else {
            write!(f, "{} ({})", self.name, self.code)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MediaLink {
    pub format: String,
    pub url: String,
    pub comment: String,
}

impl MediaLink {
    pub fn new(format: impl Into<String>, url: impl Into<String>) -> Self {
        MediaLink {
            format: format.into(),
            url: url.into(),
            comment: String::new(),
        }
    }
}

/// A start time in hundredths of a second.
///
/// Offsets are written with exactly two decimals, so the model keeps them
/// at that resolution to make serialization exact.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Offset(u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidOffset;

impl Offset {
    pub const ZERO: Offset = Offset(0);

    pub fn from_centis(centis: u64) -> Self {
        Offset(centis)
    }

    pub fn centis(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub(crate) fn parse_at(value: &str, line: usize) -> Result<Offset> {
        value.parse().map_err(|_| Error::BadOffset {
            value: value.to_string(),
            line,
        })
    }
}

impl FromStr for Offset {
    type Err = InvalidOffset;

    /// Accepts `12`, `12.5`, `12.50`; finer precision is accepted only as trailing zeros.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(InvalidOffset);
        }
        if !frac.bytes().all(|b| b.is_ascii_digit()) || (s.contains('.') && frac.is_empty()) {
            return Err(InvalidOffset);
        }
        let (cents, rest) = frac.split_at(frac.len().min(2));
        if rest.bytes().any(|b| b != b'0') {
            return Err(InvalidOffset);
        }
        let whole: u64 = whole.parse().map_err(|_| InvalidOffset)?;
        let cents: u64 = format!("{cents:0<2}").parse().map_err(|_| InvalidOffset)?;
        whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(cents))
            .map(Offset)
            .ok_or(InvalidOffset)
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceEntry {
    pub citation: String,
}

impl SourceEntry {
    pub fn new(citation: impl Into<String>) -> Self {
        SourceEntry {
            citation: citation.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Analysis {
    pub text: String,
    /// Who proposed the analysis; the vocabulary is not controlled.
    pub analyst_code: Option<String>,
}

/// The annotation layers of one unit, named after their FOSF markers in comments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotationTiers {
    /// `\ft`
    pub flint_transcription: String,
    /// `\ncft`
    pub transcription_comment: Option<String>,
    /// `\ncr`
    pub recording_comment: Option<String>,
    /// `\fg`
    pub flint_gloss: Option<String>,
    /// `\ncfg`
    pub gloss_comment_flint: Option<String>,
    /// `\fft`
    pub free_translation: Option<String>,
    /// `\ncfft`
    pub free_translation_comment: Option<String>,
    /// `\os`, one entry per field
    pub other_sources: Vec<SourceEntry>,
    /// `\ncos`, repeatable
    pub other_sources_comment: Vec<String>,
    /// `\na` with the `\analyst` extension
    pub analysis: Option<Analysis>,
    /// `\ncna`
    pub analysis_comment: Option<String>,
    /// `\ng`
    pub morpheme_gloss: Option<String>,
    /// `\ncng`
    pub morpheme_gloss_comment: Option<String>,
}

impl AnnotationTiers {
    pub fn new(transcription: impl Into<String>) -> Self {
        AnnotationTiers {
            flint_transcription: transcription.into(),
            ..Default::default()
        }
    }
}

/// A marker/value pair with no dedicated model slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub marker: String,
    pub value: String,
}

impl Extension {
    pub fn new(marker: impl Into<String>, value: impl Into<String>) -> Self {
        Extension {
            marker: marker.into(),
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TextUnit {
    pub offset: Option<Offset>,
    /// Primary text only.
    pub speaker_code: Option<String>,
    /// Lexicon only (`\sd`).
    pub syn_sem_domain: Option<String>,
    /// Lexicon only (`\or`), repeatable.
    pub other_recordings: Vec<String>,
    pub tiers: AnnotationTiers,
    /// Fields kept for fidelity that the XML grammar has no element for.
    pub extensions: Vec<Extension>,
}

impl TextUnit {
    pub fn new(transcription: impl Into<String>) -> Self {
        TextUnit {
            tiers: AnnotationTiers::new(transcription),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveText {
    pub kind: TextKind,
    pub media: Vec<MediaLink>,
    pub speakers: Vec<Speaker>,
    pub units: Vec<TextUnit>,
    pub metadata: Option<MetadataRecord>,
    /// Preamble fields with no text-level slot.
    pub extensions: Vec<Extension>,
}

impl ArchiveText {
    pub fn new(kind: TextKind) -> Self {
        ArchiveText {
            kind,
            media: Vec::new(),
            speakers: Vec::new(),
            units: Vec::new(),
            metadata: None,
            extensions: Vec::new(),
        }
    }

    pub fn speaker(&self, code: &str) -> Option<&Speaker> {
        self.speakers.iter().find(|s| s.code == code)
    }
}

/// Archive document number: box, document and optional subdocument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocumentNumber {
    pub box_no: u32,
    pub doc: u32,
    pub subdoc: Option<u32>,
}

impl DocumentNumber {
    pub fn new(box_no: u32, doc: u32, subdoc: Option<u32>) -> Self {
        DocumentNumber { box_no, doc, subdoc }
    }

    pub(crate) fn parse_at(value: &str, line: usize) -> Result<Self> {
        value.parse().map_err(|_| Error::BadDocNum {
            value: value.to_string(),
            line,
        })
    }
}

impl FromStr for DocumentNumber {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts = s
            .trim()
            .split('/')
            .map(|p| match p.trim().parse::<u32>() {
                Ok(n) if n > 0 && p.trim().bytes().all(|b| b.is_ascii_digit()) => Ok(n),
                _ => Err(()),
            })
            .collect::<std::result::Result<Vec<u32>, ()>>()?;
        match parts[..] {
            [box_no, doc] => Ok(DocumentNumber::new(box_no, doc, None)),
            [box_no, doc, sub] => Ok(DocumentNumber::new(box_no, doc, Some(sub))),
            _ => Err(()),
        }
    }
}

impl fmt::Display for DocumentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.box_no, self.doc)?;
        if let Some(sub) = self.subdoc {
            write!(f, "/{sub}")?;
        }
        Ok(())
    }
}

/// A recording date as written, with a calendar date when one can be read from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordingDate {
    pub verbatim: String,
    pub parsed: Option<NaiveDate>,
}

const DATE_FORMATS: &[&str] = &[
    "%Y-%m-%d",
    "%Y/%m/%d",
    "%d/%m/%Y",
    "%d.%m.%Y",
    "%d-%m-%Y",
    "%d %B %Y",
    "%d %b %Y",
    "%B %d %Y",
    "%b %d %Y",
    "%d %B, %Y",
    "%B %d, %Y",
];

impl RecordingDate {
    pub fn new(verbatim: impl Into<String>) -> Self {
        let verbatim = verbatim.into();
        let parsed = parse_date(&verbatim);
        RecordingDate { verbatim, parsed }
    }
}

fn parse_date(text: &str) -> Option<NaiveDate> {
    let text = text.trim();
    let leading = text.split([';', '(']).next().unwrap_or(text).trim();
    let before_comma = text.split(',').next().unwrap_or(text).trim();
    [text, leading, before_comma].iter().find_map(|candidate| {
        DATE_FORMATS
            .iter()
            .find_map(|fmt| NaiveDate::parse_from_str(candidate, fmt).ok())
    })
}

/// Archive metadata for one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetadataRecord {
    /// `\dn`
    pub document_number: DocumentNumber,
    /// `\cr`
    pub cross_refs: Vec<DocumentNumber>,
    /// `\fl`
    pub tape_log: Option<String>,
    /// `\an`
    pub aiatsis_acquisition: Option<String>,
    /// `\cm`
    pub aiatsis_tape_ref: Option<String>,
    /// `\cd`
    pub aiatsis_cdrom_ref: Option<String>,
    /// `\gp`
    pub group_number: Option<String>,
    /// `\lg`
    pub language_name: Option<String>,
    /// `\loc`
    pub location: Option<String>,
    /// `\da`
    pub date: Option<RecordingDate>,
    /// `\o`
    pub observer: Option<String>,
    /// `\snc`
    pub speakers: Vec<Speaker>,
    pub extensions: Vec<Extension>,
}

impl MetadataRecord {
    pub fn new(document_number: DocumentNumber) -> Self {
        MetadataRecord {
            document_number,
            cross_refs: Vec::new(),
            tape_log: None,
            aiatsis_acquisition: None,
            aiatsis_tape_ref: None,
            aiatsis_cdrom_ref: None,
            group_number: None,
            language_name: None,
            location: None,
            date: None,
            observer: None,
            speakers: Vec::new(),
            extensions: Vec::new(),
        }
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.cross_refs.contains(&self.document_number) {
            out.push(Diagnostic::error(
                codes::E_SELF_XREF,
                format!("document {} cross-references itself", self.document_number),
            ));
        }
        check_speakers(&self.speakers, &mut out);
        out
    }
}

fn check_speakers(speakers: &[Speaker], out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for speaker in speakers {
        if speaker.code.trim().is_empty() {
            out.push(Diagnostic::error(
                codes::E_EMPTY_SPEAKER_CODE,
                format!("speaker {:?} has an empty code", speaker.name),
            ));
        } else if !seen.insert(speaker.code.as_str()) {
            out.push(Diagnostic::error(
                codes::E_DUP_SPEAKER,
                format!("speaker code {} declared more than once", speaker.code),
            ));
        }
    }
}

/// Recast a lexical entry as a primary-text unit.
///
/// The domain and other-recording references have no place in primary text,
/// so they move to the unit's extensions under their FOSF marker names.
pub fn lexical_as_interlinear(unit: &TextUnit) -> TextUnit {
    let mut out = unit.clone();
    if let Some(domain) = out.syn_sem_domain.take() {
        out.extensions.push(Extension::new("sd", domain));
    }
    for recording in std::mem::take(&mut out.other_recordings) {
        out.extensions.push(Extension::new("or", recording));
    }
    out
}

/// Check every text and unit invariant; an empty list means the text is valid.
pub fn validate(text: &ArchiveText) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_speakers(&text.speakers, &mut out);

    for link in &text.media {
        if !link.format.is_empty() && link.url.is_empty() {
            out.push(Diagnostic::error(
                codes::E_MEDIA_URL,
                format!("media link of format {} has no url", link.format),
            ));
        } else if link.url.chars().any(char::is_whitespace) {
            out.push(Diagnostic::error(
                codes::E_MEDIA_URL,
                format!("media url {:?} contains whitespace", link.url),
            ));
        }
    }

    let mut last_offset: Option<Offset> = None;
    for (index, unit) in text.units.iter().enumerate() {
        let unit_err = |code, what: String| Diagnostic::error(code, format!("unit {index}: {what}"));
        if unit.tiers.flint_transcription.trim().is_empty() {
            out.push(unit_err(codes::E_NO_TRANSCRIPTION, "empty flint_transcription".into()));
        }
        match (text.kind, &unit.speaker_code) {
            (TextKind::Lexicon, Some(_)) => {
                out.push(unit_err(codes::E_KIND_FIELD, "speaker_code on a lexical entry".into()))
            }
            (TextKind::PrimaryText, Some(code)) if text.speaker(code).is_none() => out.push(unit_err(
                codes::E_UNKNOWN_SPEAKER,
                format!("speaker {code} is not declared"),
            )),
            _ => {}
        }
        if text.kind == TextKind::PrimaryText {
            if unit.syn_sem_domain.is_some() {
                out.push(unit_err(codes::E_KIND_FIELD, "syn_sem_domain in primary text".into()));
            }
            if !unit.other_recordings.is_empty() {
                out.push(unit_err(codes::E_KIND_FIELD, "other_recordings in primary text".into()));
            }
        }
        if let Some(offset) = unit.offset {
            if last_offset.is_some_and(|last| offset < last) {
                out.push(unit_err(
                    codes::E_OFFSET_ORDER,
                    format!("offset {offset} precedes the previous offset {}", last_offset.unwrap()),
                ));
            }
            last_offset = Some(offset);
        }
        if unit.tiers.other_sources.iter().any(|s| s.citation.trim().is_empty()) {
            out.push(unit_err(codes::E_EMPTY_SOURCE, "empty source citation".into()));
        }
    }

    if text_values(text).any(|v| v.chars().any(is_forbidden_char)) {
        out.push(Diagnostic::error(
            codes::E_BAD_CHAR,
            "text contains control characters that XML cannot carry",
        ));
    }
    if let Some(meta) = &text.metadata {
        out.extend(meta.validate());
    }
    out
}

fn is_forbidden_char(c: char) -> bool {
    (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r')
}

fn text_values(text: &ArchiveText) -> impl Iterator<Item = &str> {
    let text_level = text
        .media
        .iter()
        .flat_map(|m| [m.format.as_str(), m.url.as_str(), m.comment.as_str()])
        .chain(text.speakers.iter().flat_map(|s| [s.code.as_str(), s.name.as_str()]));
    let units = text.units.iter().flat_map(|u| {
        let t = &u.tiers;
        [
            Some(t.flint_transcription.as_str()),
            t.transcription_comment.as_deref(),
            t.recording_comment.as_deref(),
            t.flint_gloss.as_deref(),
            t.gloss_comment_flint.as_deref(),
            t.free_translation.as_deref(),
            t.free_translation_comment.as_deref(),
            t.analysis.as_ref().map(|a| a.text.as_str()),
            t.analysis.as_ref().and_then(|a| a.analyst_code.as_deref()),
            t.analysis_comment.as_deref(),
            t.morpheme_gloss.as_deref(),
            t.morpheme_gloss_comment.as_deref(),
            u.speaker_code.as_deref(),
            u.syn_sem_domain.as_deref(),
        ]
        .into_iter()
        .flatten()
        .chain(t.other_sources.iter().map(|s| s.citation.as_str()))
        .chain(t.other_sources_comment.iter().map(String::as_str))
        .chain(u.other_recordings.iter().map(String::as_str))
    });
    text_level.chain(units)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn garrwa_unit() -> TextUnit {
        let mut unit = TextUnit::new("'barki'nani");
        unit.offset = Some(Offset::ZERO);
        unit.syn_sem_domain = Some("adjective".into());
        unit.tiers.recording_comment = Some("Informant's pronunciation approaches \"balkinan\"".into());
        unit.tiers.flint_gloss = Some("bad".into());
        unit.tiers.analysis = Some(Analysis {
            text: "barki nani".into(),
            analyst_code: Some("Naomi_Keith".into()),
        });
        unit.tiers.morpheme_gloss = Some("bad (fellow) that one".into());
        unit
    }

    fn garrwa_text() -> ArchiveText {
        let mut text = ArchiveText::new(TextKind::Lexicon);
        text.media.push(MediaLink::new("audio/mp3", "302b.mp3"));
        text.speakers.push(Speaker::new("G", "Stumpy George"));
        text.units.push(garrwa_unit());
        text
    }

    #[test]
    fn offset_parse_and_format() {
        assert_eq!("0.00".parse::<Offset>().unwrap(), Offset::ZERO);
        assert_eq!("3.5".parse::<Offset>().unwrap(), Offset::from_centis(350));
        assert_eq!("12".parse::<Offset>().unwrap().to_string(), "12.00");
        assert_eq!("7.250".parse::<Offset>().unwrap(), Offset::from_centis(725));
        for bad in ["", "-1", "1.234", "1.", ".5", "1e3", "abc", " 1 . 2"] {
            assert!(bad.parse::<Offset>().is_err(), "{bad:?} should be rejected");
        }
        assert_eq!(Offset::from_centis(725).to_string(), "7.25");
        assert_eq!(Offset::from_centis(725).as_secs_f64(), 7.25);
    }

    #[test]
    fn document_numbers() {
        let dn: DocumentNumber = "1/2/3".parse().unwrap();
        assert_eq!(dn, DocumentNumber::new(1, 2, Some(3)));
        assert_eq!(dn.to_string(), "1/2/3");
        assert_eq!("1/2".parse::<DocumentNumber>().unwrap().to_string(), "1/2");
        for bad in ["1", "1/2/3/4", "0/2", "a/b", "1//2", "+1/2", ""] {
            assert!(bad.parse::<DocumentNumber>().is_err(), "{bad:?}");
        }
        let mut list = [
            DocumentNumber::new(2, 1, None),
            DocumentNumber::new(1, 2, Some(1)),
            DocumentNumber::new(1, 2, None),
        ];
        list.sort();
        assert_eq!(
            list.iter().map(ToString::to_string).collect::<Vec<_>>(),
            ["1/2", "1/2/1", "2/1"]
        );
    }

    #[test]
    fn recording_dates_best_effort() {
        let d = RecordingDate::new("12 July 1960");
        assert_eq!(d.parsed, NaiveDate::from_ymd_opt(1960, 7, 12));
        assert_eq!(
            RecordingDate::new("1961-03-04, afternoon").parsed,
            NaiveDate::from_ymd_opt(1961, 3, 4)
        );
        assert_eq!(
            RecordingDate::new("5/8/1962").parsed,
            NaiveDate::from_ymd_opt(1962, 8, 5)
        );
        let vague = RecordingDate::new("mid 1960s?");
        assert_eq!(vague.parsed, None);
        assert_eq!(vague.verbatim, "mid 1960s?");
    }

    #[test]
    fn garrwa_fragment_is_valid() {
        assert!(validate(&garrwa_text()).is_empty());
    }

    #[test]
    fn duplicate_speaker_is_one_error() {
        let mut text = garrwa_text();
        text.speakers.push(Speaker::new("G", "George again"));
        let diags = validate(&text);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::E_DUP_SPEAKER);
    }

    #[test]
    fn offsets_must_not_decrease() {
        let mut text = ArchiveText::new(TextKind::Lexicon);
        for centis in [200, 100] {
            let mut unit = TextUnit::new("x");
            unit.offset = Some(Offset::from_centis(centis));
            text.units.push(unit);
        }
        let diags = validate(&text);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, codes::E_OFFSET_ORDER);
    }

    #[test]
    fn kind_specific_fields() {
        let mut text = ArchiveText::new(TextKind::PrimaryText);
        text.units.push(garrwa_unit());
        let diags = validate(&text);
        assert_eq!(diags.iter().filter(|d| d.code == codes::E_KIND_FIELD).count(), 1);

        let mut text = ArchiveText::new(TextKind::Lexicon);
        let mut unit = TextUnit::new("x");
        unit.speaker_code = Some("G".into());
        text.units.push(unit);
        assert_eq!(validate(&text)[0].code, codes::E_KIND_FIELD);

        let mut text = ArchiveText::new(TextKind::PrimaryText);
        let mut unit = TextUnit::new("x");
        unit.speaker_code = Some("Q".into());
        text.units.push(unit);
        assert_eq!(validate(&text)[0].code, codes::E_UNKNOWN_SPEAKER);
    }

    #[test]
    fn other_checks() {
        let mut text = ArchiveText::new(TextKind::Lexicon);
        text.media.push(MediaLink::new("audio/mp3", ""));
        let mut unit = TextUnit::new(" ");
        unit.tiers.other_sources.push(SourceEntry::new(""));
        unit.tiers.flint_gloss = Some("bell\u{7}".into());
        text.units.push(unit);
        let found: Vec<_> = validate(&text).iter().map(|d| d.code).collect();
        assert_eq!(
            found,
            [
                codes::E_MEDIA_URL,
                codes::E_NO_TRANSCRIPTION,
                codes::E_EMPTY_SOURCE,
                codes::E_BAD_CHAR
            ]
        );
    }

    #[test]
    fn lexical_unit_becomes_interlinear() {
        let unit = garrwa_unit();
        let recast = lexical_as_interlinear(&unit);
        assert_eq!(recast.syn_sem_domain, None);
        assert_eq!(recast.tiers, unit.tiers);
        assert_eq!(recast.extensions, vec![Extension::new("sd", "adjective")]);
        let mut text = ArchiveText::new(TextKind::PrimaryText);
        text.units.push(recast);
        assert!(validate(&text).is_empty());
    }

    #[test]
    fn plain_unit_is_unchanged() {
        let mut unit = TextUnit::new("x");
        unit.tiers.flint_gloss = Some("y".into());
        assert_eq!(lexical_as_interlinear(&unit), unit);
    }

    #[test]
    fn other_recordings_move_to_extensions() {
        let mut unit = TextUnit::new("x");
        unit.other_recordings = vec!["302b 0:14".into()];
        let recast = lexical_as_interlinear(&unit);
        assert!(recast.other_recordings.is_empty());
        assert_eq!(recast.extensions, vec![Extension::new("or", "302b 0:14")]);
        assert_eq!(recast.tiers, unit.tiers);
        assert_eq!(recast.offset, unit.offset);
    }

    #[test]
    fn metadata_self_reference() {
        let dn = DocumentNumber::new(1, 2, None);
        let mut meta = MetadataRecord::new(dn);
        assert!(meta.validate().is_empty());
        meta.cross_refs.push(dn);
        assert_eq!(meta.validate()[0].code, codes::E_SELF_XREF);
    }
}
