//! Metadata crosswalks: archive metadata to OLAC, OLAC to Dublin Core,
//! Dublin Core to MARC.
//!
//! Archive metadata to OLAC
//!
//! | marker | OLAC term                 | value                         |
//! |--------|---------------------------|-------------------------------|
//! | dn     | identifier                | `box/doc[/subdoc]`            |
//! | cr     | relation                  | one per cross-reference       |
//! | lg     | subject_language          |                               |
//! | loc    | coverage                  |                               |
//! | da     | date                      | verbatim                      |
//! | o      | contributor (researcher)  |                               |
//! | snc    | contributor (speaker)     | `Name (CODE)`, one per speaker|
//! | fl     | description               | `tape-log:` prefix            |
//! | an     | description               | `aiatsis-acq:` prefix         |
//! | cm     | description               | `aiatsis-tape:` prefix        |
//! | cd     | description               | `aiatsis-cd:` prefix          |
//! | gp     | description               | `group:` prefix               |
//! | other  | description               | `<marker>:` prefix            |
//!
//! OLAC to Dublin Core renames `subject_language` to `subject` and
//! `type_linguistic` to `type`, and folds a contributor role into the value
//! as a trailing `[role]`.
//!
//! Dublin Core to MARC
//!
//! | DC term     | tag | indicators | subfield                   |
//! |-------------|-----|------------|----------------------------|
//! | identifier  | 024 | `8 `       | `$a`                       |
//! | relation    | 787 | `0 `       | `$n`                       |
//! | subject     | 653 | `  `       | `$a`                       |
//! | coverage    | 500 | `  `       | `$a`, `Location: ` prefix  |
//! | date        | 260 | `  `       | `$c`                       |
//! | contributor | 720 | `  `       | `$a`                       |
//! | description | 500 | `  `       | `$a`                       |
//! | type        | 655 | ` 7`       | `$a`                       |
//!
//! MARC records are written in line mode: one field per line, `=TAG`, a
//! space, the two indicators with `\` for blank, then `$`-prefixed
//! subfields. A literal `$` in a value is written `{dollar}`.

use std::fmt::{self, Write as _};

use crate::diagnostic::{codes, Diagnostic};
use crate::model::{MetadataRecord, TextKind};
use crate::xml::{escape_text, leaf, XML_DECLARATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OlacTerm {
    Identifier,
    Relation,
    SubjectLanguage,
    Coverage,
    Date,
    Contributor,
    Description,
    TypeLinguistic,
}

impl OlacTerm {
    pub fn as_str(self) -> &'static str {
        match self {
            OlacTerm::Identifier => "identifier",
            OlacTerm::Relation => "relation",
            OlacTerm::SubjectLanguage => "subject_language",
            OlacTerm::Coverage => "coverage",
            OlacTerm::Date => "date",
            OlacTerm::Contributor => "contributor",
            OlacTerm::Description => "description",
            OlacTerm::TypeLinguistic => "type_linguistic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContributorRole {
    Researcher,
    Speaker,
}

impl ContributorRole {
    pub fn as_str(self) -> &'static str {
        match self {
            ContributorRole::Researcher => "researcher",
            ContributorRole::Speaker => "speaker",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OlacElement {
    pub term: OlacTerm,
    pub value: String,
    pub refinement: Option<ContributorRole>,
}

impl OlacElement {
    pub fn new(term: OlacTerm, value: impl Into<String>) -> Self {
        OlacElement {
            term,
            value: value.into(),
            refinement: None,
        }
    }

    pub fn contributor(role: ContributorRole, value: impl Into<String>) -> Self {
        OlacElement {
            term: OlacTerm::Contributor,
            value: value.into(),
            refinement: Some(role),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OlacRecord {
    pub elements: Vec<OlacElement>,
}

impl OlacRecord {
    pub fn values(&self, term: OlacTerm) -> impl Iterator<Item = &str> {
        self.elements
            .iter()
            .filter(move |e| e.term == term)
            .map(|e| e.value.as_str())
    }

    /// Add or replace the linguistic type of the described text.
    pub fn with_linguistic_type(mut self, kind: TextKind) -> Self {
        self.elements.retain(|e| e.term != OlacTerm::TypeLinguistic);
        self.elements
            .push(OlacElement::new(OlacTerm::TypeLinguistic, kind.as_str()));
        self
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let identifiers = self.values(OlacTerm::Identifier).count();
        if identifiers != 1 {
            out.push(Diagnostic::error(
                codes::E_INVALID,
                format!("record has {identifiers} identifiers; expected exactly one"),
            ));
        }
        for e in &self.elements {
            if e.value.trim().is_empty() {
                out.push(Diagnostic::error(
                    codes::E_INVALID,
                    format!("empty {} element", e.term.as_str()),
                ));
            }
            if e.refinement.is_some() && e.term != OlacTerm::Contributor {
                out.push(Diagnostic::error(
                    codes::E_INVALID,
                    format!("{} cannot carry a contributor role", e.term.as_str()),
                ));
            }
            if e.term == OlacTerm::TypeLinguistic
                && ![TextKind::Lexicon, TextKind::PrimaryText]
                    .iter()
                    .any(|k| k.as_str() == e.value)
            {
                out.push(Diagnostic::error(
                    codes::E_INVALID,
                    format!("linguistic type {:?} is not lexicon or primary_text", e.value),
                ));
            }
        }
        out
    }
}

/// Map an archive metadata record to OLAC terms.
pub fn template1_to_olac(m: &MetadataRecord) -> OlacRecord {
    use OlacTerm::*;
    let mut elements = vec![OlacElement::new(Identifier, m.document_number.to_string())];
    let mut push = |term: OlacTerm, value: Option<&String>| {
        if let Some(v) = value.filter(|v| !v.trim().is_empty()) {
            elements.push(OlacElement::new(term, v.clone()));
        }
    };
    let cross_refs: Vec<String> = m.cross_refs.iter().map(|d| d.to_string()).collect();
    for r in &cross_refs {
        push(Relation, Some(r));
    }
    push(SubjectLanguage, m.language_name.as_ref());
    push(Coverage, m.location.as_ref());
    push(Date, m.date.as_ref().map(|d| &d.verbatim));
    if let Some(o) = m.observer.as_ref().filter(|v| !v.trim().is_empty()) {
        elements.push(OlacElement::contributor(ContributorRole::Researcher, o.clone()));
    }
    for s in &m.speakers {
        elements.push(OlacElement::contributor(ContributorRole::Speaker, s.to_string()));
    }
    let described = [
        ("tape-log:", &m.tape_log),
        ("aiatsis-acq:", &m.aiatsis_acquisition),
        ("aiatsis-tape:", &m.aiatsis_tape_ref),
        ("aiatsis-cd:", &m.aiatsis_cdrom_ref),
        ("group:", &m.group_number),
    ];
    for (prefix, value) in described {
        if let Some(v) = value.as_ref().filter(|v| !v.trim().is_empty()) {
            elements.push(OlacElement::new(Description, format!("{prefix}{v}")));
        }
    }
    for ext in &m.extensions {
        if !ext.value.trim().is_empty() {
            elements.push(OlacElement::new(Description, format!("{}:{}", ext.marker, ext.value)));
        }
    }
    OlacRecord { elements }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DcTerm {
    Identifier,
    Relation,
    Subject,
    Coverage,
    Date,
    Contributor,
    Description,
    Type,
}

impl DcTerm {
    pub fn as_str(self) -> &'static str {
        match self {
            DcTerm::Identifier => "identifier",
            DcTerm::Relation => "relation",
            DcTerm::Subject => "subject",
            DcTerm::Coverage => "coverage",
            DcTerm::Date => "date",
            DcTerm::Contributor => "contributor",
            DcTerm::Description => "description",
            DcTerm::Type => "type",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DcRecord {
    pub elements: Vec<(DcTerm, String)>,
}

impl DcRecord {
    pub fn values(&self, term: DcTerm) -> impl Iterator<Item = &str> {
        self.elements.iter().filter(move |e| e.0 == term).map(|e| e.1.as_str())
    }
}

pub fn olac_to_dc(r: &OlacRecord) -> DcRecord {
    let elements = r
        .elements
        .iter()
        .map(|e| {
            let term = match e.term {
                OlacTerm::Identifier => DcTerm::Identifier,
                OlacTerm::Relation => DcTerm::Relation,
                OlacTerm::SubjectLanguage => DcTerm::Subject,
                OlacTerm::Coverage => DcTerm::Coverage,
                OlacTerm::Date => DcTerm::Date,
                OlacTerm::Contributor => DcTerm::Contributor,
                OlacTerm::Description => DcTerm::Description,
                OlacTerm::TypeLinguistic => DcTerm::Type,
            };
            let value = match e.refinement {
                Some(role) => format!("{} [{}]", e.value, role.as_str()),
                None => e.value.clone(),
            };
            (term, value)
        })
        .collect();
    DcRecord { elements }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarcField {
    pub tag: &'static str,
    /// Blank indicators are spaces.
    pub indicators: [char; 2],
    pub subfields: Vec<(char, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarcRecord {
    pub fields: Vec<MarcField>,
}

impl MarcRecord {
    pub fn field(&self, tag: &str) -> impl Iterator<Item = &MarcField> + '_ {
        let tag = tag.to_string();
        self.fields.iter().filter(move |f| f.tag == tag)
    }
}

pub fn dc_to_marc(r: &DcRecord) -> MarcRecord {
    let fields = r
        .elements
        .iter()
        .map(|(term, value)| {
            let (tag, indicators, code, value) = match term {
                DcTerm::Identifier => ("024", ['8', ' '], 'a', value.clone()),
                DcTerm::Relation => ("787", ['0', ' '], 'n', value.clone()),
                DcTerm::Subject => ("653", [' ', ' '], 'a', value.clone()),
                DcTerm::Coverage => ("500", [' ', ' '], 'a', format!("Location: {value}")),
                DcTerm::Date => ("260", [' ', ' '], 'c', value.clone()),
                DcTerm::Contributor => ("720", [' ', ' '], 'a', value.clone()),
                DcTerm::Description => ("500", [' ', ' '], 'a', value.clone()),
                DcTerm::Type => ("655", [' ', '7'], 'a', value.clone()),
            };
            MarcField {
                tag,
                indicators,
                subfields: vec![(code, value)],
            }
        })
        .collect();
    MarcRecord { fields }
}

impl fmt::Display for MarcField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "={} ", self.tag)?;
        for i in self.indicators {
            f.write_char(if i == ' ' { '\\' } else { i })?;
        }
        for (code, value) in &self.subfields {
            let value = value.replace('$', "{dollar}").replace(['\r', '\n'], " ");
            write!(f, "${code}{value}")?;
        }
        Ok(())
    }
}

impl fmt::Display for MarcRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for field in &self.fields {
            writeln!(f, "{field}")?;
        }
        Ok(())
    }
}

/// Several MARC records separated by blank lines.
pub fn emit_marc(records: &[MarcRecord]) -> String {
    records.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
}

fn olac_body(out: &mut String, r: &OlacRecord) {
    out.push_str("<olac>\n");
    for e in &r.elements {
        match e.refinement {
            Some(role) => leaf(out, e.term.as_str(), &[("refine", role.as_str())], Some(&e.value)),
            None => leaf(out, e.term.as_str(), &[], Some(&e.value)),
        }
    }
    out.push_str("</olac>\n");
}

fn dc_body(out: &mut String, r: &DcRecord) {
    out.push_str("<dc>\n");
    for (term, value) in &r.elements {
        let _ = writeln!(out, "<{0}>{1}</{0}>", term.as_str(), escape_text(value));
    }
    out.push_str("</dc>\n");
}

/// One element per entry, in record order.
pub fn emit_olac_xml(r: &OlacRecord) -> String {
    let mut out = String::from(XML_DECLARATION);
    olac_body(&mut out, r);
    out
}

pub fn emit_olac_xml_records(records: &[OlacRecord]) -> String {
    let mut out = String::from(XML_DECLARATION);
    out.push_str("<olac_records>\n");
    for r in records {
        olac_body(&mut out, r);
    }
    out.push_str("</olac_records>\n");
    out
}

pub fn emit_dc_xml(r: &DcRecord) -> String {
    let mut out = String::from(XML_DECLARATION);
    dc_body(&mut out, r);
    out
}

pub fn emit_dc_xml_records(records: &[DcRecord]) -> String {
    let mut out = String::from(XML_DECLARATION);
    out.push_str("<dc_records>\n");
    for r in records {
        dc_body(&mut out, r);
    }
    out.push_str("</dc_records>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DocumentNumber, RecordingDate, Speaker};
    use crate::xml::{validate_xml_with, Grammar};

    fn garrwa() -> MetadataRecord {
        let mut m = MetadataRecord::new(DocumentNumber::new(1, 2, Some(3)));
        m.language_name = Some("Garrwa".into());
        m.speakers.push(Speaker::new("G", "Stumpy George"));
        m
    }

    fn metadata_grammar() -> Grammar {
        Grammar::archive_text().merge(Grammar::metadata())
    }

    #[test]
    fn garrwa_record() {
        let olac = template1_to_olac(&garrwa());
        assert_eq!(
            olac.elements,
            vec![
                OlacElement::new(OlacTerm::Identifier, "1/2/3"),
                OlacElement::new(OlacTerm::SubjectLanguage, "Garrwa"),
                OlacElement::contributor(ContributorRole::Speaker, "Stumpy George (G)"),
            ]
        );
        assert!(olac.validate().is_empty());
    }

    #[test]
    fn identifier_only() {
        let olac = template1_to_olac(&MetadataRecord::new(DocumentNumber::new(4, 5, None)));
        assert_eq!(olac.elements, vec![OlacElement::new(OlacTerm::Identifier, "4/5")]);
        let xml = emit_olac_xml(&olac);
        assert_eq!(
            xml,
            format!("{XML_DECLARATION}<olac>\n<identifier>4/5</identifier>\n</olac>\n")
        );
        assert!(validate_xml_with(xml.as_bytes(), &metadata_grammar()).is_empty());
    }

    #[test]
    fn cross_refs_keep_order() {
        let mut m = garrwa();
        m.cross_refs = vec![DocumentNumber::new(9, 9, None), DocumentNumber::new(1, 1, None)];
        let olac = template1_to_olac(&m);
        assert_eq!(olac.values(OlacTerm::Relation).collect::<Vec<_>>(), vec!["9/9", "1/1"]);
    }

    #[test]
    fn descriptions_are_prefixed() {
        let mut m = garrwa();
        m.tape_log = Some("302b".into());
        m.group_number = Some("7".into());
        m.date = Some(RecordingDate::new("June 1975"));
        let olac = template1_to_olac(&m);
        assert_eq!(
            olac.values(OlacTerm::Description).collect::<Vec<_>>(),
            vec!["tape-log:302b", "group:7"]
        );
        assert_eq!(olac.values(OlacTerm::Date).collect::<Vec<_>>(), vec!["June 1975"]);
    }

    #[test]
    fn dc_mapping() {
        let dc = olac_to_dc(&template1_to_olac(&garrwa()));
        assert_eq!(dc.values(DcTerm::Subject).collect::<Vec<_>>(), vec!["Garrwa"]);
        assert_eq!(
            dc.values(DcTerm::Contributor).collect::<Vec<_>>(),
            vec!["Stumpy George (G) [speaker]"]
        );
        let plain = OlacRecord {
            elements: vec![
                OlacElement::new(OlacTerm::Identifier, "1/2"),
                OlacElement::new(OlacTerm::Contributor, "Someone"),
            ],
        };
        assert_eq!(
            olac_to_dc(&plain).values(DcTerm::Contributor).collect::<Vec<_>>(),
            vec!["Someone"]
        );
    }

    #[test]
    fn marc_mapping() {
        let mut m = garrwa();
        m.tape_log = Some("a".into());
        m.group_number = Some("b".into());
        let marc = dc_to_marc(&olac_to_dc(&template1_to_olac(&m)));
        let id = marc.field("024").next().unwrap();
        assert_eq!(id.subfields, vec![('a', "1/2/3".to_string())]);
        assert_eq!(id.to_string(), "=024 8\\$a1/2/3");
        assert_eq!(marc.field("653").next().unwrap().to_string(), "=653 \\\\$aGarrwa");
        let notes: Vec<_> = marc.field("500").map(|f| f.subfields[0].1.as_str()).collect();
        assert_eq!(notes, vec!["tape-log:a", "group:b"]);
    }

    #[test]
    fn marc_line_escapes() {
        let field = MarcField {
            tag: "500",
            indicators: [' ', ' '],
            subfields: vec![('a', "cost $5\nnow".into())],
        };
        assert_eq!(field.to_string(), "=500 \\\\$acost {dollar}5 now");
    }

    #[test]
    fn olac_xml() {
        let mut m = garrwa();
        m.speakers.push(Speaker::new("N", "Nancy & co"));
        m.observer = Some("Flint".into());
        let olac = template1_to_olac(&m).with_linguistic_type(TextKind::Lexicon);
        assert!(olac.validate().is_empty());
        let xml = emit_olac_xml(&olac);
        assert_eq!(xml.matches("<contributor refine=\"speaker\">").count(), 2);
        assert!(xml.contains("<contributor refine=\"researcher\">Flint</contributor>"));
        assert!(xml.contains("Nancy &amp; co (N)"));
        assert!(xml.contains("<type_linguistic>lexicon</type_linguistic>"));
        assert!(validate_xml_with(xml.as_bytes(), &metadata_grammar()).is_empty());
        let many = emit_olac_xml_records(&[olac.clone(), olac]);
        assert!(validate_xml_with(many.as_bytes(), &metadata_grammar()).is_empty());
        let dc = emit_dc_xml_records(&[olac_to_dc(&template1_to_olac(&m))]);
        assert!(validate_xml_with(dc.as_bytes(), &metadata_grammar()).is_empty());
    }

    #[test]
    fn record_validation() {
        let bad = OlacRecord {
            elements: vec![OlacElement::new(OlacTerm::TypeLinguistic, "poem")],
        };
        assert_eq!(bad.validate().len(), 2);
    }
}
