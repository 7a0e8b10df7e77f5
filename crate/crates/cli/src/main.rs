//! `fielddata`: command-line front end for the archive toolkit.
//!
//! Diagnostics go to stderr, one per line. Exit status is 0 when nothing
//! worse than a note was reported, 1 when there were warnings or errors,
//! and 2 when the command could not complete.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fielddata::catalog::{build_catalog, check_cross_refs, records_from_file, search, source_files, Catalog};
use fielddata::crosswalk::{
    dc_to_marc, emit_dc_xml_records, emit_marc, emit_olac_xml_records, olac_to_dc, template1_to_olac, OlacRecord,
};
use fielddata::fosf::{emit_fosf, parse_fosf, sniff_template, Template};
use fielddata::media::{check_manifest, unit_segments, validate_media_links, FsResolver, MediaManifest};
use fielddata::model::{metadata_from_fosf, text_from_fosf, text_to_fosf, validate, ArchiveText, TextKind};
use fielddata::render::{Direction, Granularity, RenderSpec, View};
use fielddata::tabular::import_table;
use fielddata::xml::{from_xml, to_xml, validate_xml};
use fielddata::{Diagnostic, Severity};

/// Not a library code: the file system refused a read or write.
const E_IO: &str = "E_IO";

#[derive(Parser)]
#[command(
    name = "fielddata",
    version,
    about = "Convert, validate, crosswalk and render field archive data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a FOSF file and write it as XML. Metadata files become OLAC records.
    Parse {
        #[arg(long, value_enum)]
        template: TemplateArg,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a text between FOSF, tables and XML.
    Convert {
        #[arg(long, value_enum)]
        from: FromArg,
        #[arg(long, value_enum)]
        to: ToArg,
        #[arg(long, value_enum, default_value = "comma")]
        delimiter: DelimiterArg,
        /// Text kind of a table or FOSF input; FOSF is sniffed when omitted.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an XML text against the grammar and the model invariants.
    Validate { input: PathBuf },
    /// Map the metadata of a FOSF file to OLAC, Dublin Core or MARC.
    Crosswalk {
        #[arg(long, value_enum)]
        to: CrosswalkArg,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render an XML text as a reading view.
    Render {
        #[arg(long, value_enum)]
        view: ViewArg,
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        #[arg(long, value_enum)]
        granularity: Option<GranularityArg>,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Audio segmentation and media manifest checks.
    Media {
        #[command(subcommand)]
        command: MediaCommand,
    },
    /// Catalogue over the metadata in a directory of FOSF files.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum MediaCommand {
    /// Print one `unit<TAB>start<TAB>end` line per timed unit.
    Segments {
        input: PathBuf,
        #[arg(long)]
        duration: f64,
    },
    /// Check a tab-separated manifest against the archive format policy.
    CheckManifest { manifest: PathBuf },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List every record found in DIR.
    Build { dir: PathBuf },
    /// Print the document numbers of records matching every query token.
    Search {
        query: String,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Report dangling and one-way cross-references.
    Xrefs {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TemplateArg {
    Metadata,
    Lexicon,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FromArg {
    Fosf,
    Table,
    Xml,
}

#[derive(Clone, Copy, ValueEnum)]
enum ToArg {
    Xml,
    Fosf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Comma,
    Tab,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lexicon,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum CrosswalkArg {
    Olac,
    Dc,
    Marc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Lexicon,
    Wordlist,
    Interlinear,
    Hypertext,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    St,
    Ts,
}

#[derive(Clone, Copy, ValueEnum)]
enum GranularityArg {
    Phrase,
    Analysis,
    Full,
}

impl From<KindArg> for TextKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lexicon => TextKind::Lexicon,
            KindArg::Text => TextKind::PrimaryText,
        }
    }
}

fn template_for(kind: TextKind) -> Template {
    match kind {
        TextKind::Lexicon => Template::Lexicon,
        TextKind::PrimaryText => Template::PrimaryText,
    }
}

/// A command that could not complete.
struct Fatal(Diagnostic);

impl From<fielddata::Error> for Fatal {
    fn from(e: fielddata::Error) -> Self {
        Fatal(e.to_diagnostic())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Fatal {
    Fatal(Diagnostic::error(E_IO, format!("{}: {e}", path.display())))
}

type Run = Result<Vec<Diagnostic>, Fatal>;

fn read(path: &Path) -> Result<Vec<u8>, Fatal> {
    fs::read(path).map_err(|e| io_error(path, e))
}

fn write_out(output: Option<&Path>, content: &str) -> Result<(), Fatal> {
    match output {
        Some(path) => fs::write(path, content).map_err(|e| io_error(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

fn read_xml_text(path: &Path) -> Result<ArchiveText, Fatal> {
    Ok(from_xml(&read(path)?)?)
}

fn parse(template: TemplateArg, input: &Path, output: Option<&Path>) -> Run {
    let bytes = read(input)?;
    let template = match template {
        TemplateArg::Metadata => Template::Metadata,
        TemplateArg::Lexicon => Template::Lexicon,
        TemplateArg::Text => Template::PrimaryText,
    };
    let doc = parse_fosf(&bytes, template)?;
    if template == Template::Metadata {
        let records = metadata_from_fosf(&doc)?;
        let olac: Vec<OlacRecord> = records.value.iter().map(template1_to_olac).collect();
        write_out(output, &emit_olac_xml_records(&olac))?;
        return Ok(records.diagnostics);
    }
    let text = text_from_fosf(&doc)?;
    write_out(output, &to_xml(&text.value)?)?;
    Ok(text.diagnostics)
}

fn convert(
    from: FromArg,
    to: ToArg,
    delimiter: DelimiterArg,
    kind: Option<KindArg>,
    input: &Path,
    output: Option<&Path>,
) -> Run {
    let bytes = read(input)?;
    let mut diagnostics = Vec::new();
    let text = match from {
        FromArg::Fosf => {
            let template = match kind {
                Some(k) => template_for(k.into()),
                None => match sniff_template(fielddata::diagnostic::decode_utf8(&bytes)?) {
                    Template::Metadata => Template::Lexicon,
                    t => t,
                },
            };
            let out = text_from_fosf(&parse_fosf(&bytes, template)?)?;
            diagnostics.extend(out.diagnostics);
            out.value
        }
        FromArg::Table => {
            let delimiter = match delimiter {
                DelimiterArg::Comma => ',',
                DelimiterArg::Tab => '\t',
            };
            let kind = kind.map(TextKind::from).unwrap_or(TextKind::Lexicon);
            let out = import_table(&bytes, delimiter, kind)?;
            diagnostics.extend(out.diagnostics);
            out.value
        }
        FromArg::Xml => from_xml(&bytes)?,
    };
    let content = match to {
        ToArg::Xml => to_xml(&text)?,
        ToArg::Fosf => emit_fosf(&text_to_fosf(&text)?)?,
    };
    write_out(output, &content)?;
    Ok(diagnostics)
}

fn validate_file(input: &Path) -> Run {
    let bytes = read(input)?;
    let mut diagnostics = validate_xml(&bytes);
    if diagnostics.is_empty() {
        diagnostics.extend(validate(&from_xml(&bytes)?));
    }
    Ok(diagnostics)
}

fn olac_records(bytes: &[u8]) -> Result<(Vec<OlacRecord>, Vec<Diagnostic>), Fatal> {
    let template = sniff_template(fielddata::diagnostic::decode_utf8(bytes)?);
    let doc = parse_fosf(bytes, template)?;
    if template == Template::Metadata {
        let out = metadata_from_fosf(&doc)?;
        return Ok((out.value.iter().map(template1_to_olac).collect(), out.diagnostics));
    }
    let out = text_from_fosf(&doc)?;
    let kind = out.value.kind;
    let records = out
        .value
        .metadata
        .iter()
        .map(|m| template1_to_olac(m).with_linguistic_type(kind))
        .collect();
    Ok((records, out.diagnostics))
}

fn crosswalk(to: CrosswalkArg, input: &Path, output: Option<&Path>) -> Run {
    let (olac, mut diagnostics) = olac_records(&read(input)?)?;
    for record in &olac {
        diagnostics.extend(record.validate());
    }
    let content = match to {
        CrosswalkArg::Olac => emit_olac_xml_records(&olac),
        CrosswalkArg::Dc => emit_dc_xml_records(&olac.iter().map(olac_to_dc).collect::<Vec<_>>()),
        CrosswalkArg::Marc => emit_marc(&olac.iter().map(|r| dc_to_marc(&olac_to_dc(r))).collect::<Vec<_>>()),
    };
    write_out(output, &content)?;
    Ok(diagnostics)
}

fn render(
    view: ViewArg,
    direction: Option<DirectionArg>,
    granularity: Option<GranularityArg>,
    input: &Path,
    output: Option<&Path>,
) -> Run {
    let spec = RenderSpec {
        view: match view {
            ViewArg::Lexicon => View::Lexicon,
            ViewArg::Wordlist => View::Wordlist,
            ViewArg::Interlinear => View::Interlinear,
            ViewArg::Hypertext => View::Hypertext,
        },
        direction: direction.map(|d| match d {
            DirectionArg::St => Direction::SourceToTarget,
            DirectionArg::Ts => Direction::TargetToSource,
        }),
        granularity: granularity.map(|g| match g {
            GranularityArg::Phrase => Granularity::Phrase,
            GranularityArg::Analysis => Granularity::Analysis,
            GranularityArg::Full => Granularity::Full,
        }),
    };
    let text = read_xml_text(input)?;
    write_out(output, &spec.render(std::slice::from_ref(&text))?)?;
    Ok(spec.check())
}

fn segments(input: &Path, duration: f64) -> Run {
    let text = read_xml_text(input)?;
    let spans = unit_segments(&text, duration)?;
    let mut out = String::new();
    for (unit, span) in &spans.value {
        out.push_str(&format!("u{unit}\t{span}\n"));
    }
    write_out(None, &out)?;
    let mut diagnostics = spans.diagnostics;
    diagnostics.extend(validate_media_links(&text, &FsResolver::for_document(input)));
    Ok(diagnostics)
}

fn manifest(path: &Path) -> Run {
    Ok(check_manifest(&MediaManifest::parse(&read(path)?)?))
}

fn load_catalog(dir: &Path) -> Result<(Catalog, Vec<Diagnostic>), Fatal> {
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for path in source_files(dir).map_err(|e| io_error(dir, e))? {
        match records_from_file(&read(&path)?) {
            Ok(out) => {
                records.extend(out.value);
                diagnostics.extend(out.diagnostics);
            }
            Err(e) => {
                let d = e.to_diagnostic();
                return Err(Fatal(
                    Diagnostic::error(d.code, format!("{}: {}", path.display(), d.message)).at(d.line),
                ));
            }
        }
    }
    Ok((build_catalog(records)?, diagnostics))
}

fn catalog(command: &CatalogCommand) -> Run {
    match command {
        CatalogCommand::Build { dir } => {
            let (catalog, diagnostics) = load_catalog(dir)?;
            let mut out = String::new();
            for r in &catalog.records {
                let field = |v: &Option<String>| {
                    v.as_deref()
                        .unwrap_or("")
                        .split_whitespace()
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    r.document_number,
                    field(&r.language_name),
                    field(&r.location)
                ));
            }
            write_out(None, &out)?;
            Ok(diagnostics)
        }
        CatalogCommand::Search { query, dir } => {
            let (catalog, diagnostics) = load_catalog(dir)?;
            let out: String = search(&catalog, query).iter().map(|d| format!("{d}\n")).collect();
            write_out(None, &out)?;
            Ok(diagnostics)
        }
        CatalogCommand::Xrefs { dir } => {
            let (catalog, mut diagnostics) = load_catalog(dir)?;
            diagnostics.extend(check_cross_refs(&catalog));
            Ok(diagnostics)
        }
    }
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Parse {
            template,
            input,
            output,
        } => parse(template, &input, output.as_deref()),
        Command::Convert {
            from,
            to,
            delimiter,
            kind,
            input,
            output,
        } => convert(from, to, delimiter, kind, &input, output.as_deref()),
        Command::Validate { input } => validate_file(&input),
        Command::Crosswalk { to, input, output } => crosswalk(to, &input, output.as_deref()),
        Command::Render {
            view,
            direction,
            granularity,
            input,
            output,
        } => render(view, direction, granularity, &input, output.as_deref()),
        Command::Media { command } => match command {
            MediaCommand::Segments { input, duration } => segments(&input, duration),
            MediaCommand::CheckManifest { manifest: path } => manifest(&path),
        },
        Command::Catalog { command } => catalog(&command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stderr = std::io::stderr().lock();
    match run(cli) {
        Ok(diagnostics) => {
            for d in &diagnostics {
                let _ = writeln!(stderr, "{d}");
            }
            if diagnostics.iter().any(|d| d.severity > Severity::Note) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Fatal(d)) => {
            let _ = writeln!(stderr, "{d}");
            ExitCode::from(2)
        }
    }
}
