//! Time-offset media linkage and master/derivative media manifests.
//!
//! A unit offset marks where its recording starts; it ends where the next
//! offset starts, and the last one at the end of the recording.
//!
//! Manifest files hold one entry per line with five tab-separated fields:
//! role (`master` or `derivative`), kind (`audio` or `image`), format,
//! rate (sample rate in Hz for audio, dpi for images) and path. Blank lines
//! and lines starting with `#` are skipped.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::diagnostic::{codes, decode_utf8, Diagnostic, Error, Outcome, Result};
use crate::model::ArchiveText;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSpan {
    pub start_s: f64,
    pub end_s: f64,
}

impl SegmentSpan {
    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }
}

impl fmt::Display for SegmentSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}\t{:.2}", self.start_s, self.end_s)
    }
}

/// Spans between successive offsets, the last running to `duration`.
///
/// Equal consecutive offsets would give empty spans; those are dropped
/// with a warning.
pub fn compute_segments(offsets: &[f64], duration: f64) -> Result<Outcome<Vec<SegmentSpan>>> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::OffsetRange {
            index: 0,
            value: duration,
        });
    }
    for (index, &value) in offsets.iter().enumerate() {
        if !(value.is_finite() && value >= 0.0 && value < duration) {
            return Err(Error::OffsetRange { index, value });
        }
        if index > 0 && value < offsets[index - 1] {
            return Err(Error::OffsetOrder { index, value });
        }
    }
    let mut spans = Vec::with_capacity(offsets.len());
    let mut diagnostics = Vec::new();
    for (index, &start) in offsets.iter().enumerate() {
        let end = offsets.get(index + 1).copied().unwrap_or(duration);
        if end > start {
            spans.push(SegmentSpan {
                start_s: start,
                end_s: end,
            });
        } else {
            diagnostics.push(Diagnostic::warning(
                codes::W_ZERO_SPAN,
                format!("offset {index} ({start}) equals its successor; empty span dropped"),
            ));
        }
    }
    Ok(Outcome::new(spans, diagnostics))
}

/// Spans for the units of a text that carry offsets, paired with unit indices.
pub fn unit_segments(text: &ArchiveText, duration: f64) -> Result<Outcome<Vec<(usize, SegmentSpan)>>> {
    let timed: Vec<(usize, f64)> = text
        .units
        .iter()
        .enumerate()
        .filter_map(|(i, u)| u.offset.map(|o| (i, o.as_secs_f64())))
        .collect();
    let offsets: Vec<f64> = timed.iter().map(|t| t.1).collect();
    let out = compute_segments(&offsets, duration)?;
    // Each kept span starts at a distinct offset; the unit is the last one at that offset.
    let spans = out
        .value
        .into_iter()
        .map(|span| {
            let unit = timed
                .iter()
                .rev()
                .find(|t| t.1 == span.start_s)
                .map(|t| t.0)
                .unwrap_or_default();
            (unit, span)
        })
        .collect();
    Ok(Outcome::new(spans, out.diagnostics))
}

/// Answers whether a media URL points at something that exists.
pub trait Resolver {
    fn exists(&self, url: &str) -> bool;
}

impl<F: Fn(&str) -> bool> Resolver for F {
    fn exists(&self, url: &str) -> bool {
        self(url)
    }
}

/// Resolves relative URLs and `file:` URLs against a base directory.
/// Network URLs are assumed to exist.
#[derive(Debug, Clone)]
pub struct FsResolver {
    pub base: PathBuf,
}

impl FsResolver {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        FsResolver { base: base.into() }
    }

    /// Resolver for a document's own directory.
    pub fn for_document(path: &Path) -> Self {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        FsResolver { base }
    }
}

impl Resolver for FsResolver {
    fn exists(&self, url: &str) -> bool {
        let url = url.split('#').next().unwrap_or(url);
        let lower = url.to_ascii_lowercase();
        if lower.starts_with("http://") || lower.starts_with("https://") {
            return true;
        }
        let path = url.strip_prefix("file://").unwrap_or(url);
        if path.is_empty() {
            return false;
        }
        self.base.join(path).is_file()
    }
}

pub fn validate_media_links(text: &ArchiveText, resolver: &dyn Resolver) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for link in &text.media {
        if !resolver.exists(&link.url) {
            out.push(Diagnostic::error(
                codes::E_MISSING_MEDIA,
                format!("media {} not found", link.url),
            ));
        }
    }
    if text.media.is_empty() && text.units.iter().any(|u| u.offset.is_some()) {
        out.push(Diagnostic::warning(
            codes::W_ORPHAN_OFFSETS,
            "units carry offsets but the text links no media",
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MediaRole {
    Master,
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MediaKind {
    Audio,
    Image,
}

impl FromStr for MediaRole {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "master" => Ok(MediaRole::Master),
            "derivative" => Ok(MediaRole::Derivative),
            _ => Err(()),
        }
    }
}

impl FromStr for MediaKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "audio" => Ok(MediaKind::Audio),
            "image" => Ok(MediaKind::Image),
            _ => Err(()),
        }
    }
}

impl fmt::Display for MediaRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MediaRole::Master => "master",
            MediaRole::Derivative => "derivative",
        })
    }
}

impl fmt::Display for MediaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MediaKind::Audio => "audio",
            MediaKind::Image => "image",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub role: MediaRole,
    pub kind: MediaKind,
    pub format: String,
    /// Hz for audio, dpi for images.
    pub rate: u32,
    pub path: String,
    pub line: Option<usize>,
}

impl ManifestEntry {
    pub fn new(role: MediaRole, kind: MediaKind, format: &str, rate: u32, path: &str) -> Self {
        ManifestEntry {
            role,
            kind,
            format: format.to_string(),
            rate,
            path: path.to_string(),
            line: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MediaManifest {
    pub entries: Vec<ManifestEntry>,
}

impl MediaManifest {
    pub fn parse(input: &[u8]) -> Result<MediaManifest> {
        let text = decode_utf8(input)?;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Manifest { message, line };
            let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
            let [role, kind, format, rate, path] = fields[..] else {
                return Err(bad(format!("expected 5 tab-separated fields, found {}", fields.len())));
            };
            entries.push(ManifestEntry {
                role: role.parse().map_err(|_| bad(format!("unknown role {role:?}")))?,
                kind: kind.parse().map_err(|_| bad(format!("unknown kind {kind:?}")))?,
                format: format.to_string(),
                rate: rate
                    .parse()
                    .map_err(|_| bad(format!("rate {rate:?} is not a whole number")))?,
                path: path.to_string(),
                line: Some(line),
            });
        }
        Ok(MediaManifest { entries })
    }
}

/// The required format and rate for a role and kind. Image derivatives
/// have no rate requirement.
pub fn format_policy(role: MediaRole, kind: MediaKind) -> (&'static str, Option<u32>) {
    match (role, kind) {
        (MediaRole::Master, MediaKind::Audio) => ("wav", Some(44_100)),
        (MediaRole::Derivative, MediaKind::Audio) => ("mp3", Some(16_000)),
        (MediaRole::Master, MediaKind::Image) => ("tiff", Some(1200)),
        (MediaRole::Derivative, MediaKind::Image) => ("jpeg", None),
    }
}

fn canonical_format(format: &str) -> String {
    let lower = format.trim().to_ascii_lowercase();
    match lower.as_str() {
        "tif" => "tiff".into(),
        "jpg" => "jpeg".into(),
        _ => lower,
    }
}

pub fn check_manifest(m: &MediaManifest) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for entry in &m.entries {
        let (format, rate) = format_policy(entry.role, entry.kind);
        let mut problems = Vec::new();
        if canonical_format(&entry.format) != format {
            problems.push(format!("format {} (expected {format})", entry.format));
        }
        if let Some(rate) = rate.filter(|r| *r != entry.rate) {
            problems.push(format!("rate {} (expected {rate})", entry.rate));
        }
        if !problems.is_empty() {
            let mut d = Diagnostic::error(
                codes::E_POLICY,
                format!("{} {} {}: {}", entry.kind, entry.role, entry.path, problems.join(", ")),
            );
            d.line = entry.line;
            out.push(d);
        }
        let paired = m
            .entries
            .iter()
            .any(|e| e.role == MediaRole::Derivative && e.kind == entry.kind);
        if entry.role == MediaRole::Master && !paired {
            let mut d = Diagnostic::warning(
                codes::W_UNPAIRED_MASTER,
                format!("{} master {} has no {} derivative", entry.kind, entry.path, entry.kind),
            );
            d.line = entry.line;
            out.push(d);
        }
    }
    out
}
