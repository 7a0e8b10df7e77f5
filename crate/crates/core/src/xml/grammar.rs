//! Element grammars for the XML documents this crate reads and writes.
//!
//! A [`Grammar`] is the DTD-equivalent contract: each element declares a
//! content model and its attributes. The `.dtd` files shipped under
//! `grammar/` are generated by [`Grammar::to_dtd`] and checked by tests.

use std::fmt::Write;

use roxmltree::{Document, Node};

use crate::diagnostic::{codes, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occurs {
    One,
    Optional,
    ZeroOrMore,
}

impl Occurs {
    fn suffix(self) -> &'static str {
        match self {
            Occurs::One => "",
            Occurs::Optional => "?",
            Occurs::ZeroOrMore => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Particle {
    Element(&'static str, Occurs),
    Choice(&'static [&'static str], Occurs),
}

impl Particle {
    fn matches(&self, name: &str) -> bool {
        match self {
            Particle::Element(n, _) => *n == name,
            Particle::Choice(names, _) => names.contains(&name),
        }
    }

    fn occurs(&self) -> Occurs {
        match self {
            Particle::Element(_, o) | Particle::Choice(_, o) => *o,
        }
    }

    fn describe(&self) -> String {
        match self {
            Particle::Element(n, _) => format!("<{n}>"),
            Particle::Choice(names, _) => names.iter().map(|n| format!("<{n}>")).collect::<Vec<_>>().join(" or "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Content {
    Empty,
    Text,
    Elements(Vec<Particle>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrType {
    CData,
    Enum(&'static [&'static str]),
    /// Non-negative decimal with at most two fractional digits.
    Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrDecl {
    pub name: &'static str,
    pub ty: AttrType,
    pub required: bool,
}

/// Forbids child `child` when attribute `attr` has value `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildRestriction {
    pub attr: &'static str,
    pub value: &'static str,
    pub child: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementDecl {
    pub name: &'static str,
    pub content: Content,
    pub attrs: Vec<AttrDecl>,
    pub restrictions: Vec<ChildRestriction>,
}

impl ElementDecl {
    fn new(name: &'static str, content: Content) -> Self {
        ElementDecl {
            name,
            content,
            attrs: Vec::new(),
            restrictions: Vec::new(),
        }
    }

    fn attr(mut self, name: &'static str, ty: AttrType, required: bool) -> Self {
        self.attrs.push(AttrDecl { name, ty, required });
        self
    }

    fn restrict(mut self, attr: &'static str, value: &'static str, child: &'static str) -> Self {
        self.restrictions.push(ChildRestriction { attr, value, child });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub title: &'static str,
    pub roots: Vec<&'static str>,
    pub elements: Vec<ElementDecl>,
}

const UNIT_ELEMENTS: &[&str] = &["lexical_item", "text_unit"];
const TEXT_TYPES: &[&str] = &["lexicon", "primary_text"];
const CONTRIBUTOR_ROLES: &[&str] = &["researcher", "speaker"];

pub const OLAC_TERMS: &[&str] = &[
    "identifier",
    "relation",
    "subject_language",
    "coverage",
    "date",
    "contributor",
    "description",
    "type_linguistic",
];

pub const DC_TERMS: &[&str] = &[
    "identifier",
    "relation",
    "subject",
    "coverage",
    "date",
    "contributor",
    "description",
    "type",
];

fn unit_content(lexical: bool) -> Content {
    use Occurs::*;
    use Particle::Element as E;
    let mut seq = vec![
        E("flint_transcription", One),
        E("flint_transcription_comment", Optional),
    ];
    if lexical {
        seq.push(E("other_recordings", ZeroOrMore));
    }
    seq.extend([
        E("recording_comment", Optional),
        E("flint_gloss", Optional),
        E("flint_gloss_comment", Optional),
        E("flint_free_translation", Optional),
        E("flint_free_translation_comment", Optional),
        E("other_sources", Optional),
        E("other_sources_comment", ZeroOrMore),
        E("analysis", Optional),
        E("analysis_comment", Optional),
        E("gloss", Optional),
        E("gloss_comment", Optional),
    ]);
    Content::Elements(seq)
}

const TEXT_LEAVES: &[&str] = &[
    "flint_transcription",
    "flint_transcription_comment",
    "other_recordings",
    "recording_comment",
    "flint_gloss",
    "flint_gloss_comment",
    "flint_free_translation",
    "flint_free_translation_comment",
    "source",
    "other_sources_comment",
    "analysis_comment",
    "gloss",
    "gloss_comment",
];

impl Grammar {
    /// Grammar for interlinear text documents rooted at `<text>`.
    pub fn archive_text() -> Self {
        use AttrType::*;
        use Occurs::*;
        let mut elements = vec![
            ElementDecl::new(
                "text",
                Content::Elements(vec![
                    Particle::Element("media", ZeroOrMore),
                    Particle::Element("speaker", ZeroOrMore),
                    Particle::Choice(UNIT_ELEMENTS, ZeroOrMore),
                ]),
            )
            .attr("type", Enum(TEXT_TYPES), true)
            .restrict("type", "lexicon", "text_unit")
            .restrict("type", "primary_text", "lexical_item"),
            ElementDecl::new("media", Content::Empty)
                .attr("format", CData, true)
                .attr("url", CData, true)
                .attr("comment", CData, false),
            ElementDecl::new("speaker", Content::Text).attr("code", CData, true),
            ElementDecl::new("lexical_item", unit_content(true))
                .attr("offset", Decimal, false)
                .attr("syn_sem_domain_code", CData, false),
            ElementDecl::new("text_unit", unit_content(false))
                .attr("offset", Decimal, false)
                .attr("speaker_code", CData, false),
            ElementDecl::new(
                "other_sources",
                Content::Elements(vec![Particle::Element("source", ZeroOrMore)]),
            ),
            ElementDecl::new("analysis", Content::Text).attr("code", CData, false),
        ];
        elements.extend(TEXT_LEAVES.iter().map(|n| ElementDecl::new(n, Content::Text)));
        Grammar {
            title: "Interlinear archive text",
            roots: vec!["text"],
            elements,
        }
    }

    /// Grammar for OLAC and Dublin Core metadata records.
    pub fn metadata() -> Self {
        use Occurs::*;
        let olac_rest: &'static [&'static str] = &OLAC_TERMS[1..];
        let dc_rest: &'static [&'static str] = &DC_TERMS[1..];
        let mut elements = vec![
            ElementDecl::new(
                "olac_records",
                Content::Elements(vec![Particle::Element("olac", ZeroOrMore)]),
            ),
            ElementDecl::new(
                "olac",
                Content::Elements(vec![
                    Particle::Element("identifier", One),
                    Particle::Choice(olac_rest, ZeroOrMore),
                ]),
            ),
            ElementDecl::new(
                "dc_records",
                Content::Elements(vec![Particle::Element("dc", ZeroOrMore)]),
            ),
            ElementDecl::new(
                "dc",
                Content::Elements(vec![
                    Particle::Element("identifier", One),
                    Particle::Choice(dc_rest, ZeroOrMore),
                ]),
            ),
        ];
        let mut leaves: Vec<&'static str> = Vec::new();
        for term in OLAC_TERMS.iter().chain(DC_TERMS) {
            if !leaves.contains(term) {
                leaves.push(term);
            }
        }
        for term in leaves {
            let decl = ElementDecl::new(term, Content::Text);
            elements.push(if term == "contributor" {
                decl.attr("refine", AttrType::Enum(CONTRIBUTOR_ROLES), false)
            } else {
                decl
            });
        }
        Grammar {
            title: "Metadata records (OLAC and Dublin Core)",
            roots: vec!["olac", "olac_records", "dc", "dc_records"],
            elements,
        }
    }

    /// Union of two grammars. Elements declared by both keep the first declaration.
    pub fn merge(mut self, other: Grammar) -> Grammar {
        for root in other.roots {
            if !self.roots.contains(&root) {
                self.roots.push(root);
            }
        }
        for decl in other.elements {
            if self.element(decl.name).is_none() {
                self.elements.push(decl);
            }
        }
        self
    }

    pub fn element(&self, name: &str) -> Option<&ElementDecl> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// The grammar as DTD text. Rules a DTD cannot state appear as comments.
    pub fn to_dtd(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "<!-- {} -->", self.title);
        let _ = writeln!(out, "<!-- Root elements: {} -->", self.roots.join(", "));
        for decl in &self.elements {
            out.push('\n');
            let model = match &decl.content {
                Content::Empty => "EMPTY".to_string(),
                Content::Text => "(#PCDATA)".to_string(),
                Content::Elements(seq) => {
                    let parts: Vec<String> = seq
                        .iter()
                        .map(|p| match p {
                            Particle::Element(n, o) => format!("{n}{}", o.suffix()),
                            Particle::Choice(names, o) => {
                                format!("({}){}", names.join(" | "), o.suffix())
                            }
                        })
                        .collect();
                    format!("({})", parts.join(", "))
                }
            };
            let _ = writeln!(out, "<!ELEMENT {} {}>", decl.name, model);
            for attr in &decl.attrs {
                let ty = match attr.ty {
                    AttrType::CData | AttrType::Decimal => "CDATA".to_string(),
                    AttrType::Enum(values) => format!("({})", values.join(" | ")),
                };
                let default = if attr.required { "#REQUIRED" } else { "#IMPLIED" };
                let _ = writeln!(out, "<!ATTLIST {} {} {} {}>", decl.name, attr.name, ty, default);
                if attr.ty == AttrType::Decimal {
                    let _ = writeln!(
                        out,
                        "<!-- {}/@{}: non-negative decimal, at most two fractional digits -->",
                        decl.name, attr.name
                    );
                }
            }
            for r in &decl.restrictions {
                let _ = writeln!(
                    out,
                    "<!-- {} with {}=\"{}\" must not contain {} -->",
                    decl.name, r.attr, r.value, r.child
                );
            }
        }
        out
    }

    /// Check a parsed document against the grammar.
    pub fn validate(&self, doc: &Document) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let root = doc.root_element();
        let name = root.tag_name().name();
        if !self.roots.contains(&name) {
            out.push(schema_error(
                doc,
                root,
                format!(
                    "<{name}> is not a root element of this grammar (expected {})",
                    self.roots.join(", ")
                ),
            ));
            return out;
        }
        self.check_element(doc, root, &mut out);
        out
    }

    fn check_element(&self, doc: &Document, node: Node, out: &mut Vec<Diagnostic>) {
        let name = node.tag_name().name();
        let Some(decl) = self.element(name) else {
            out.push(schema_error(doc, node, format!("unknown element <{name}>")));
            return;
        };

        for attr in node.attributes() {
            match decl.attrs.iter().find(|a| a.name == attr.name()) {
                None => out.push(schema_error(
                    doc,
                    node,
                    format!("<{name}> has undeclared attribute {}", attr.name()),
                )),
                Some(a) => {
                    if let Some(problem) = check_attr_value(a.ty, attr.value()) {
                        out.push(schema_error(doc, node, format!("<{name}> @{}: {problem}", a.name)));
                    }
                }
            }
        }
        for a in decl.attrs.iter().filter(|a| a.required) {
            if node.attribute(a.name).is_none() {
                out.push(schema_error(
                    doc,
                    node,
                    format!("<{name}> lacks required attribute {}", a.name),
                ));
            }
        }

        let children: Vec<Node> = node.children().filter(Node::is_element).collect();
        let stray_text = node
            .children()
            .find(|c| c.is_text() && !c.text().unwrap_or("").trim().is_empty());
        match &decl.content {
            Content::Empty | Content::Text => {
                if let Some(child) = children.first() {
                    out.push(schema_error(
                        doc,
                        *child,
                        format!("<{}> is not allowed inside <{name}>", child.tag_name().name()),
                    ));
                } else if let (Content::Empty, Some(text)) = (&decl.content, stray_text) {
                    out.push(schema_error(doc, text, format!("<{name}> must be empty")));
                }
            }
            Content::Elements(seq) => {
                if let Some(text) = stray_text {
                    out.push(schema_error(
                        doc,
                        text,
                        format!("character data is not allowed in <{name}>"),
                    ));
                }
                let known: Vec<Node> = children
                    .iter()
                    .copied()
                    .filter(|c| self.element(c.tag_name().name()).is_some())
                    .collect();
                if let Some(d) = match_sequence(doc, node, seq, &known) {
                    out.push(d);
                }
                for r in &decl.restrictions {
                    if node.attribute(r.attr) == Some(r.value) {
                        if let Some(child) = known.iter().find(|c| c.tag_name().name() == r.child) {
                            out.push(schema_error(
                                doc,
                                *child,
                                format!("<{}> is not allowed in <{name} {}=\"{}\">", r.child, r.attr, r.value),
                            ));
                        }
                    }
                }
                for child in children {
                    self.check_element(doc, child, out);
                }
            }
        }
    }
}

/// Greedy match of child elements against a deterministic sequence model.
/// Reports the first mismatch only.
fn match_sequence(doc: &Document, parent: Node, seq: &[Particle], children: &[Node]) -> Option<Diagnostic> {
    let parent_name = parent.tag_name().name();
    let mut i = 0;
    for particle in seq {
        let here = |i: usize| children.get(i).is_some_and(|c| particle.matches(c.tag_name().name()));
        match particle.occurs() {
            Occurs::One => {
                if !here(i) {
                    return Some(schema_error(
                        doc,
                        parent,
                        format!("<{parent_name}> is missing required {}", particle.describe()),
                    ));
                }
                i += 1;
            }
            Occurs::Optional => {
                if here(i) {
                    i += 1;
                }
            }
            Occurs::ZeroOrMore => {
                while here(i) {
                    i += 1;
                }
            }
        }
    }
    children.get(i).map(|child| {
        schema_error(
            doc,
            *child,
            format!("<{}> is out of place in <{parent_name}>", child.tag_name().name()),
        )
    })
}

fn check_attr_value(ty: AttrType, value: &str) -> Option<String> {
    match ty {
        AttrType::CData => None,
        AttrType::Enum(values) => {
            (!values.contains(&value)).then(|| format!("{value:?} is not one of {}", values.join(", ")))
        }
        AttrType::Decimal => value
            .parse::<crate::model::Offset>()
            .is_err()
            .then(|| format!("{value:?} is not a non-negative decimal")),
    }
}

fn schema_error(doc: &Document, node: Node, message: String) -> Diagnostic {
    Diagnostic::error(codes::E_SCHEMA, message).at(doc.text_pos_at(node.range().start).row as usize)
}
