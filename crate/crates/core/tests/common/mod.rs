//! Generators shared by the property tests and the acceptance runner.
#![allow(dead_code)]

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

use fielddata::model::{
    Analysis, ArchiveText, DocumentNumber, Extension, MediaLink, MetadataRecord, Offset, RecordingDate, SourceEntry,
    Speaker, TextKind, TextUnit,
};

/// Single-line values with no surrounding whitespace, including markup
/// characters, backslashes and non-ASCII letters.
pub fn value() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9'\"<>&;:(),.īŋɲ\\\\-]([a-zA-Z0-9 '\"<>&;:(),.īŋɲ\\\\-]{0,16}[a-zA-Z0-9'\"<>&;:(),.īŋɲ-])?"
}

fn opt_value() -> impl Strategy<Value = Option<String>> {
    option::of(value())
}

fn speaker_name() -> impl Strategy<Value = String> {
    "([A-Z][a-z]{0,7}( [A-Z][a-z]{0,7})?)?"
}

fn speakers() -> impl Strategy<Value = Vec<Speaker>> {
    proptest::collection::btree_map("[A-Z]{1,2}", speaker_name(), 0..4)
        .prop_map(|m| m.into_iter().map(|(code, name)| Speaker::new(code, name)).collect())
}

fn media() -> impl Strategy<Value = Vec<MediaLink>> {
    let format = prop_oneof![Just(""), Just("audio/mp3"), Just("audio/wav"), Just("image/jpeg")];
    let comment = prop_oneof![
        Just(String::new()),
        value().prop_filter("dash means empty", |c| c != "-")
    ];
    vec(
        (format, "[a-z0-9]{1,8}\\.(mp3|wav|jpg)", comment).prop_map(|(format, url, comment)| MediaLink {
            format: format.to_string(),
            url,
            comment,
        }),
        0..3,
    )
}

fn analysis() -> impl Strategy<Value = Option<Analysis>> {
    prop_oneof![
        Just(None),
        (value(), option::of("[A-Za-z_]{1,10}")).prop_map(|(text, code)| Some(Analysis {
            text,
            analyst_code: code
        })),
        "[A-Za-z_]{1,10}".prop_map(|code| Some(Analysis {
            text: String::new(),
            analyst_code: Some(code)
        })),
    ]
}

fn tiers_unit() -> impl Strategy<Value = TextUnit> {
    (
        (value(), opt_value(), opt_value(), opt_value(), opt_value()),
        (opt_value(), opt_value(), vec(value(), 0..3), vec(value(), 0..2)),
        (analysis(), opt_value(), opt_value(), opt_value()),
    )
        .prop_map(
            |((ft, ncft, ncr, fg, ncfg), (fft, ncfft, os, ncos), (na, ncna, ng, ncng))| {
                let mut unit = TextUnit::new(ft);
                let t = &mut unit.tiers;
                t.transcription_comment = ncft;
                t.recording_comment = ncr;
                t.flint_gloss = fg;
                t.gloss_comment_flint = ncfg;
                t.free_translation = fft;
                t.free_translation_comment = ncfft;
                t.other_sources = os.into_iter().map(SourceEntry::new).collect();
                t.other_sources_comment = ncos;
                t.analysis = na;
                t.analysis_comment = ncna;
                t.morpheme_gloss = ng;
                t.morpheme_gloss_comment = ncng;
                unit
            },
        )
}

fn extensions() -> impl Strategy<Value = Vec<Extension>> {
    vec(("x[a-z]{1,4}", value()).prop_map(|(m, v)| Extension::new(m, v)), 0..2)
}

fn docnum() -> impl Strategy<Value = DocumentNumber> {
    (1u32..50, 1u32..50, option::of(1u32..9)).prop_map(|(b, d, s)| DocumentNumber::new(b, d, s))
}

pub fn metadata() -> impl Strategy<Value = MetadataRecord> {
    (
        docnum(),
        vec(docnum(), 0..3),
        (opt_value(), opt_value(), opt_value(), opt_value(), opt_value()),
        (opt_value(), opt_value(), opt_value(), opt_value()),
        speakers(),
    )
        .prop_filter_map(
            "no self reference",
            |(dn, cr, (fl, an, cm, cd, gp), (lg, loc, da, o), snc)| {
                if cr.contains(&dn) {
                    return None;
                }
                let mut m = MetadataRecord::new(dn);
                m.cross_refs = cr;
                m.tape_log = fl;
                m.aiatsis_acquisition = an;
                m.aiatsis_tape_ref = cm;
                m.aiatsis_cdrom_ref = cd;
                m.group_number = gp;
                m.language_name = lg;
                m.location = loc;
                m.date = da.map(RecordingDate::new);
                m.observer = o;
                m.speakers = snc;
                Some(m)
            },
        )
}

/// Valid texts. With `full_fidelity` the texts also carry the parts only
/// FOSF can hold: a metadata record and extension fields.
pub fn archive_text(full_fidelity: bool) -> impl Strategy<Value = ArchiveText> {
    let kind = prop_oneof![Just(TextKind::Lexicon), Just(TextKind::PrimaryText)];
    (kind, speakers(), media(), any::<bool>())
        .prop_flat_map(move |(kind, speakers, media, speak)| {
            let codes: Vec<String> = speakers.iter().map(|s| s.code.clone()).collect();
            let use_speakers = kind == TextKind::PrimaryText && speak && !codes.is_empty();
            let code = if use_speakers {
                proptest::sample::select(codes).prop_map(Some).boxed()
            } else {
                Just(None).boxed()
            };
            let unit = (
                tiers_unit(),
                code,
                option::of(0u64..500),
                opt_value(),
                vec(value(), 0..2),
                if full_fidelity {
                    extensions().boxed()
                } else {
                    Just(vec![]).boxed()
                },
            );
            let meta = if full_fidelity {
                option::of(metadata()).boxed()
            } else {
                Just(None).boxed()
            };
            let text_ext = if full_fidelity {
                extensions().boxed()
            } else {
                Just(vec![]).boxed()
            };
            (Just((kind, speakers, media)), vec(unit, 0..5), meta, text_ext)
        })
        .prop_map(|((kind, speakers, media), units, metadata, extensions)| {
            let mut text = ArchiveText::new(kind);
            text.metadata = metadata.map(|mut m| {
                m.speakers = speakers.clone();
                m
            });
            text.speakers = speakers;
            text.media = media;
            text.extensions = extensions;
            let mut clock = 0u64;
            for (mut unit, code, step, sd, or, ext) in units {
                unit.speaker_code = code;
                unit.offset = step.map(|s| {
                    clock += s;
                    Offset::from_centis(clock)
                });
                if kind == TextKind::Lexicon {
                    unit.syn_sem_domain = sd;
                    unit.other_recordings = or;
                }
                unit.extensions = ext;
                text.units.push(unit);
            }
            text
        })
}

/// Source text of a lexicon file: records of an `\ft` head followed by a
/// random selection of lexicon fields with random, possibly wrapped, values.
pub fn lexicon_source() -> impl Strategy<Value = String> {
    const BODY: &[&str] = &[
        "or", "ncr", "sd", "ncft", "fg", "ncfg", "fft", "ncfft", "os", "ncos", "na", "ncna", "ng", "ncng", "offset",
        "analyst",
    ];
    let field = (proptest::sample::select(BODY), value(), option::of(value()));
    let record = (value(), proptest::collection::vec(field, 0..8));
    vec(record, 0..6).prop_map(|records| {
        let mut out = String::new();
        let mut clock = 0;
        for (ft, fields) in records {
            out.push_str(&format!("\\ft {ft}\n"));
            let mut seen = Vec::new();
            for (marker, value, wrapped) in fields {
                let repeatable = ["os", "ncos", "or"].contains(&marker);
                if !repeatable && seen.contains(&marker) {
                    continue;
                }
                seen.push(marker);
                if marker == "offset" {
                    clock += 25;
                    out.push_str(&format!("\\offset {}.{:02}\n", clock / 100, clock % 100));
                    continue;
                }
                out.push_str(&format!("\\{marker} {value}\n"));
                if let Some(more) = wrapped {
                    let more = more.trim_start_matches('\\');
                    if !more.is_empty() {
                        out.push_str(more);
                        out.push('\n');
                    }
                }
            }
            out.push('\n');
        }
        out
    })
}

/// Lexicons whose rendered lines split unambiguously on double spaces.
pub fn readable_lexicon(text: &ArchiveText) -> bool {
    let plain = |v: &str| !v.contains("  ") && !(v.starts_with('(') && v.ends_with(')'));
    text.kind == TextKind::Lexicon
        && text
            .units
            .iter()
            .all(|u| plain(&u.tiers.flint_transcription) && u.tiers.flint_gloss.as_deref().is_none_or(plain))
}

/// (transcription, gloss) pairs read back from a rendered lexicon.
pub fn lexicon_pairs(out: &str, target_first: bool) -> Vec<(String, Option<String>)> {
    let mut pairs = Vec::new();
    let mut unglossed = false;
    for line in out.lines().skip(1).filter(|l| !l.is_empty()) {
        if line == "Unglossed" {
            unglossed = true;
            continue;
        }
        let parts: Vec<&str> = line
            .split("  ")
            .filter(|p| !(p.starts_with('(') && p.ends_with(')')))
            .collect();
        let pair = match (target_first && !unglossed, parts.as_slice()) {
            (true, [fg, ft]) => (ft.to_string(), Some(fg.to_string())),
            (false, [ft, fg]) => (ft.to_string(), Some(fg.to_string())),
            (_, [ft]) => (ft.to_string(), None),
            _ => panic!("unexpected lexicon line {line:?}"),
        };
        pairs.push(pair);
    }
    pairs.sort();
    pairs
}
