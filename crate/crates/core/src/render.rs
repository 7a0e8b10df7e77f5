//! Reading views over a text: lexicon, word list, interlinear and hypertext.
//!
//! Source is the transcription language and target the gloss language.
//! Sorting is by code point. Values spanning several lines are joined with
//! spaces. Layouts are described in `docs/layouts.md`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::diagnostic::{codes, Diagnostic, Error, Result};
use crate::model::{ArchiveText, TextKind, TextUnit};
use crate::xml::{escape_attr, escape_text, XML_DECLARATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Lexicon,
    Wordlist,
    Interlinear,
    Hypertext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    SourceToTarget,
    TargetToSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum Granularity {
    #[default]
    Phrase,
    Analysis,
    Full,
}

impl FromStr for View {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lexicon" => Ok(View::Lexicon),
            "wordlist" => Ok(View::Wordlist),
            "interlinear" => Ok(View::Interlinear),
            "hypertext" => Ok(View::Hypertext),
            _ => Err(format!("unknown view {s:?}")),
        }
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "st" | "source_to_target" => Ok(Direction::SourceToTarget),
            "ts" | "target_to_source" => Ok(Direction::TargetToSource),
            _ => Err(format!("unknown direction {s:?}")),
        }
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "phrase" => Ok(Granularity::Phrase),
            "analysis" => Ok(Granularity::Analysis),
            "full" => Ok(Granularity::Full),
            _ => Err(format!("unknown granularity {s:?}")),
        }
    }
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::SourceToTarget => "source to target",
            Direction::TargetToSource => "target to source",
        }
    }
}

/// A view with its options. Unset options take their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub view: View,
    pub direction: Option<Direction>,
    pub granularity: Option<Granularity>,
}

impl RenderSpec {
    pub fn new(view: View) -> Self {
        RenderSpec {
            view,
            direction: None,
            granularity: None,
        }
    }

    /// Warnings for options the view does not use.
    pub fn check(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let uses_direction = matches!(self.view, View::Lexicon | View::Wordlist);
        if self.direction.is_some() && !uses_direction {
            out.push(Diagnostic::warning(
                codes::W_IGNORED_OPTION,
                "direction applies only to the lexicon and wordlist views; ignored",
            ));
        }
        if self.granularity.is_some() && self.view != View::Interlinear {
            out.push(Diagnostic::warning(
                codes::W_IGNORED_OPTION,
                "granularity applies only to the interlinear view; ignored",
            ));
        }
        out
    }

    /// Render `texts` with this spec. Views other than the word list take
    /// the texts one after another.
    pub fn render(&self, texts: &[ArchiveText]) -> Result<String> {
        let direction = self.direction.unwrap_or_default();
        let granularity = self.granularity.unwrap_or_default();
        match self.view {
            View::Wordlist => render_wordlist(texts, direction),
            View::Lexicon => texts.iter().map(|t| render_lexicon(t, direction)).collect(),
            View::Interlinear => Ok(texts.iter().map(|t| render_interlinear(t, granularity)).collect()),
            View::Hypertext => Ok(texts.iter().map(render_hypertext).collect()),
        }
    }
}

fn flat(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn require_lexicon(text: &ArchiveText) -> Result<()> {
    match text.kind {
        TextKind::Lexicon => Ok(()),
        other => Err(Error::Kind {
            expected: "lexicon".into(),
            found: other.as_str().into(),
        }),
    }
}

fn gloss(unit: &TextUnit) -> Option<String> {
    unit.tiers.flint_gloss.as_deref().map(flat).filter(|g| !g.is_empty())
}

fn entry_line(lead: &str, domain: Option<&str>, counter: Option<&str>) -> String {
    let mut parts = vec![lead.to_string()];
    if let Some(d) = domain.map(flat).filter(|d| !d.is_empty()) {
        parts.push(format!("({d})"));
    }
    parts.extend(counter.map(str::to_string));
    parts.join("  ")
}

/// Dictionary-style listing, one line per entry.
///
/// Source to target keeps document order and leads with the transcription.
/// Target to source sorts by gloss, leads with it, and lists entries
/// without a gloss under a trailing `Unglossed` heading.
pub fn render_lexicon(text: &ArchiveText, direction: Direction) -> Result<String> {
    require_lexicon(text)?;
    let mut out = format!("Lexicon: {}\n", direction.label());
    let mut entries = Vec::new();
    let mut unglossed = Vec::new();
    for unit in &text.units {
        let ft = flat(&unit.tiers.flint_transcription);
        let fg = gloss(unit);
        let domain = unit.syn_sem_domain.as_deref();
        match direction {
            Direction::SourceToTarget => entries.push((String::new(), entry_line(&ft, domain, fg.as_deref()))),
            Direction::TargetToSource => match fg {
                Some(fg) => entries.push((fg.clone(), entry_line(&fg, domain, Some(&ft)))),
                None => unglossed.push(entry_line(&ft, domain, None)),
            },
        }
    }
    if direction == Direction::TargetToSource {
        // Stable, so equal glosses keep document order.
        entries.sort_by(|a, b| a.0.cmp(&b.0));
    }
    if !entries.is_empty() {
        out.push('\n');
        for (_, line) in entries {
            out.push_str(&line);
            out.push('\n');
        }
    }
    if !unglossed.is_empty() {
        out.push_str("\nUnglossed\n");
        for line in unglossed {
            out.push_str(&line);
            out.push('\n');
        }
    }
    Ok(out)
}

/// `lead<TAB>counter` lines sorted by lead term. Repeated pairs collapse
/// into one line suffixed with their count. Target to source skips
/// entries without a gloss.
pub fn render_wordlist(texts: &[ArchiveText], direction: Direction) -> Result<String> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for text in texts {
        require_lexicon(text)?;
        for unit in &text.units {
            let ft = flat(&unit.tiers.flint_transcription);
            let fg = gloss(unit);
            match direction {
                Direction::SourceToTarget => pairs.push((ft, fg.unwrap_or_default())),
                Direction::TargetToSource => {
                    if let Some(fg) = fg {
                        pairs.push((fg, ft));
                    }
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut lines: Vec<(String, String, usize)> = Vec::new();
    for (lead, counter) in pairs {
        match lines.iter_mut().find(|l| l.0 == lead && l.1 == counter) {
            Some(line) => line.2 += 1,
            None => lines.push((lead, counter, 1)),
        }
    }
    let mut out = String::new();
    for (lead, counter, count) in lines {
        let _ = write!(out, "{lead}\t{counter}");
        if count > 1 {
            let _ = write!(out, " ({count})");
        }
        out.push('\n');
    }
    Ok(out)
}

/// The labelled lines of one unit at a granularity, without speaker prefix.
pub fn unit_lines(unit: &TextUnit, granularity: Granularity) -> Vec<String> {
    use Granularity::*;
    let t = &unit.tiers;
    let mut lines = Vec::new();
    let mut line = |level: Granularity, label: &str, value: Option<&str>| {
        if granularity >= level {
            if let Some(v) = value.map(flat).filter(|v| !v.is_empty()) {
                lines.push(format!("{label}: {v}"));
            }
        }
    };
    let offset = unit.offset.map(|o| o.to_string());
    line(Phrase, "ft", Some(&t.flint_transcription));
    line(Full, "offset", offset.as_deref());
    line(Full, "ncft", t.transcription_comment.as_deref());
    line(Full, "ncr", t.recording_comment.as_deref());
    line(Full, "sd", unit.syn_sem_domain.as_deref());
    for or in &unit.other_recordings {
        line(Full, "or", Some(or));
    }
    line(Phrase, "fg", t.flint_gloss.as_deref());
    line(Full, "ncfg", t.gloss_comment_flint.as_deref());
    line(Phrase, "fft", t.free_translation.as_deref());
    line(Full, "ncfft", t.free_translation_comment.as_deref());
    for os in &t.other_sources {
        line(Full, "os", Some(&os.citation));
    }
    for ncos in &t.other_sources_comment {
        line(Full, "ncos", Some(ncos));
    }
    let analysis = t.analysis.as_ref();
    line(Analysis, "na", analysis.map(|a| a.text.as_str()));
    line(Full, "analyst", analysis.and_then(|a| a.analyst_code.as_deref()));
    line(Full, "ncna", t.analysis_comment.as_deref());
    line(Analysis, "ng", t.morpheme_gloss.as_deref());
    line(Full, "ncng", t.morpheme_gloss_comment.as_deref());
    lines
}

/// One block per unit, blocks separated by a blank line. Each line is
/// labelled with its tier marker and, in primary text, prefixed with the
/// speaker code in brackets.
pub fn render_interlinear(text: &ArchiveText, granularity: Granularity) -> String {
    let blocks: Vec<String> = text
        .units
        .iter()
        .map(|unit| {
            let prefix = unit
                .speaker_code
                .as_deref()
                .map(|c| format!("[{c}] "))
                .unwrap_or_default();
            unit_lines(unit, granularity)
                .into_iter()
                .map(|l| format!("{prefix}{l}\n"))
                .collect()
        })
        .collect();
    blocks.join("\n")
}

fn title(text: &ArchiveText) -> String {
    let kind = match text.kind {
        TextKind::Lexicon => "Lexicon",
        TextKind::PrimaryText => "Text",
    };
    let language = text
        .metadata
        .as_ref()
        .and_then(|m| m.language_name.as_deref())
        .map(flat)
        .filter(|l| !l.is_empty());
    match (language, &text.metadata) {
        (Some(lang), Some(m)) => format!("{lang} {} {}", kind.to_lowercase(), m.document_number),
        _ => kind.to_string(),
    }
}

const STYLE: &str = "body{font-family:serif;max-width:48em;margin:auto}\
.unit{margin:1em 0}.ft{font-weight:bold}.label{color:#666;font-size:80%;margin-right:.5em}";

/// A standalone XHTML page. Each unit is a `div` with id `u<index>`; when
/// the text links media and the unit has an offset, the transcription
/// carries a link to `<url>#t=<offset>`.
pub fn render_hypertext(text: &ArchiveText) -> String {
    let title = escape_text(&title(text));
    let mut out = String::from(XML_DECLARATION);
    out.push_str("<!DOCTYPE html>\n<html xmlns=\"http://www.w3.org/1999/xhtml\">\n");
    let _ = writeln!(
        out,
        "<head>\n<meta charset=\"UTF-8\"/>\n<title>{title}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<h1>{title}</h1>"
    );
    for link in &text.media {
        let _ = writeln!(
            out,
            "<p class=\"media\">Recording: <a href=\"{}\">{}</a>{}</p>",
            escape_attr(&link.url),
            escape_text(&link.url),
            if link.comment.is_empty() {
                String::new()
            } else {
                format!(" ({})", escape_text(&flat(&link.comment)))
            }
        );
    }
    if !text.speakers.is_empty() {
        out.push_str("<dl class=\"speakers\">\n");
        for s in &text.speakers {
            let _ = writeln!(
                out,
                "<dt>{}</dt><dd>{}</dd>",
                escape_text(&s.code),
                escape_text(&flat(&s.name))
            );
        }
        out.push_str("</dl>\n");
    }
    let media = text.media.first();
    for (i, unit) in text.units.iter().enumerate() {
        let _ = writeln!(out, "<div class=\"unit\" id=\"u{i}\">");
        let mut lines = unit_lines(unit, Granularity::Full).into_iter();
        let speaker = unit
            .speaker_code
            .as_deref()
            .map(|c| format!("<span class=\"speaker\">[{}]</span> ", escape_text(c)))
            .unwrap_or_default();
        let ft = lines.next().unwrap_or_default();
        let ft = ft.strip_prefix("ft: ").unwrap_or(&ft);
        let play = match (media, unit.offset) {
            (Some(link), Some(offset)) => {
                let href = format!("{}#t={}", link.url, offset);
                format!(
                    " <a class=\"play\" href=\"{}\">&#9654; {offset}</a>",
                    escape_attr(&href)
                )
            }
            _ => String::new(),
        };
        let _ = writeln!(out, "<p class=\"ft\">{speaker}{}{play}</p>", escape_text(ft));
        for line in lines {
            let (label, value) = line.split_once(": ").unwrap_or(("", &line));
            if label == "offset" {
                continue;
            }
            let _ = writeln!(
                out,
                "<p class=\"{label}\"><span class=\"label\">{label}</span>{}</p>",
                escape_text(value)
            );
        }
        out.push_str("</div>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}
