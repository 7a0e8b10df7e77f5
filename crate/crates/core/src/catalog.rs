//! A searchable catalogue over archive metadata records.
//!
//! Search is by token: language name, location, observer and speaker names
//! are split on anything that is not a letter or digit and lowercased. A
//! multi-token query matches records holding every token.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use crate::diagnostic::{codes, Diagnostic, Error, Outcome, Result};
use crate::fosf::{parse_fosf, sniff_template, Template};
use crate::model::{metadata_from_fosf, text_from_fosf, DocumentNumber, MetadataRecord};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    /// Ordered by document number.
    pub records: Vec<MetadataRecord>,
    pub index: BTreeMap<String, BTreeSet<DocumentNumber>>,
}

impl Catalog {
    pub fn get(&self, number: &DocumentNumber) -> Option<&MetadataRecord> {
        self.records
            .binary_search_by(|r| r.document_number.cmp(number))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

pub fn build_catalog(records: Vec<MetadataRecord>) -> Result<Catalog> {
    let mut records = records;
    records.sort_by_key(|r| r.document_number);
    if let Some(pair) = records
        .windows(2)
        .find(|w| w[0].document_number == w[1].document_number)
    {
        return Err(Error::DuplicateDocNum(pair[0].document_number.to_string()));
    }
    let mut index: BTreeMap<String, BTreeSet<DocumentNumber>> = BTreeMap::new();
    for record in &records {
        let sources = [&record.language_name, &record.location, &record.observer]
            .into_iter()
            .flatten()
            .map(String::as_str)
            .chain(record.speakers.iter().map(|s| s.name.as_str()));
        for source in sources {
            for token in tokens(source) {
                index.entry(token).or_default().insert(record.document_number);
            }
        }
    }
    Ok(Catalog { records, index })
}

/// Document numbers of records matching every query token, in order.
/// An empty query matches everything.
pub fn search(catalog: &Catalog, query: &str) -> Vec<DocumentNumber> {
    let mut result: Option<BTreeSet<DocumentNumber>> = None;
    for token in tokens(query) {
        let hits = catalog.index.get(&token).cloned().unwrap_or_default();
        result = Some(match result {
            Some(acc) => acc.intersection(&hits).copied().collect(),
            None => hits,
        });
    }
    match result {
        Some(set) => set.into_iter().collect(),
        None => catalog.records.iter().map(|r| r.document_number).collect(),
    }
}

/// A warning for every cross-reference to an absent record and a note for
/// every reference the target does not return.
pub fn check_cross_refs(catalog: &Catalog) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for record in &catalog.records {
        let from = record.document_number;
        for to in &record.cross_refs {
            match catalog.get(to) {
                None => out.push(Diagnostic::warning(
                    codes::W_DANGLING_XREF,
                    format!("{from} cross-references {to}, which is not in the catalogue"),
                )),
                Some(target) if !target.cross_refs.contains(&from) => out.push(Diagnostic::note(
                    codes::N_ASYMMETRIC,
                    format!("{from} cross-references {to} but {to} does not reference {from}"),
                )),
                Some(_) => {}
            }
        }
    }
    out
}

/// Metadata records from one FOSF file: every record of a metadata file,
/// or the preamble record of a lexicon or primary text.
pub fn records_from_file(input: &[u8]) -> Result<Outcome<Vec<MetadataRecord>>> {
    let text = crate::diagnostic::decode_utf8(input)?;
    let template = sniff_template(text);
    let doc = parse_fosf(input, template)?;
    if template == Template::Metadata {
        return metadata_from_fosf(&doc);
    }
    Ok(text_from_fosf(&doc)?.map(|t| t.metadata.into_iter().collect()))
}

/// The `.sfm` and `.txt` files directly inside `dir`, sorted by name.
pub fn source_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("sfm") || e.eq_ignore_ascii_case("txt"))
        })
        .collect();
    files.sort();
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Speaker;

    fn record(dn: &str, lg: Option<&str>, cr: &[&str]) -> MetadataRecord {
        let mut r = MetadataRecord::new(dn.parse().unwrap());
        r.language_name = lg.map(str::to_string);
        r.cross_refs = cr.iter().map(|c| c.parse().unwrap()).collect();
        r
    }

    #[test]
    fn index_and_search() {
        let mut garrwa = record("1/2/3", Some("Garrwa"), &[]);
        garrwa.speakers.push(Speaker::new("G", "Stumpy George"));
        garrwa.location = Some("Borroloola, NT".into());
        let other = record("1/1", Some("Yanyuwa"), &[]);
        let catalog = build_catalog(vec![garrwa, other]).unwrap();
        let dn: DocumentNumber = "1/2/3".parse().unwrap();
        assert_eq!(catalog.index["garrwa"], BTreeSet::from([dn]));
        assert_eq!(search(&catalog, "Garrwa"), vec![dn]);
        assert_eq!(search(&catalog, "GEORGE borroloola"), vec![dn]);
        assert_eq!(search(&catalog, "garrwa zzz"), vec![]);
        assert_eq!(search(&catalog, ""), vec!["1/1".parse().unwrap(), dn]);
    }

    #[test]
    fn empty_and_duplicates() {
        let catalog = build_catalog(vec![]).unwrap();
        assert!(catalog.is_empty());
        assert!(search(&catalog, "").is_empty());
        let err = build_catalog(vec![record("1/2", None, &[]), record("1/2", None, &[])]).unwrap_err();
        assert_eq!(err.code(), codes::E_DUP_DOCNUM);
    }

    #[test]
    fn cross_refs() {
        let symmetric = build_catalog(vec![record("1/1", None, &["1/2"]), record("1/2", None, &["1/1"])]).unwrap();
        assert!(check_cross_refs(&symmetric).is_empty());

        let dangling = build_catalog(vec![record("1/1", None, &["1/2"])]).unwrap();
        let d = check_cross_refs(&dangling);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, codes::W_DANGLING_XREF);

        let one_way = build_catalog(vec![record("1/1", None, &["1/2"]), record("1/2", None, &[])]).unwrap();
        let d = check_cross_refs(&one_way);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, codes::N_ASYMMETRIC);
    }

    #[test]
    fn records_from_files() {
        let meta = records_from_file(b"\\dn 1/2\n\\lg Garrwa\n\\dn 1/3\n").unwrap().value;
        assert_eq!(meta.len(), 2);
        let text = records_from_file(b"\\dn 4/5\n\\lg Garrwa\n\\ft a\n\\fg b\n")
            .unwrap()
            .value;
        assert_eq!(text.len(), 1);
        assert_eq!(text[0].language_name.as_deref(), Some("Garrwa"));
        let bare = records_from_file(b"\\ft a\n").unwrap().value;
        assert!(bare.is_empty());
    }
}
