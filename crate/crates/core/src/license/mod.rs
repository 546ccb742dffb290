//! Structural Creative Commons license extraction.
//!
//! A document is parsed into a [`NodeTree`]; [`find_candidates`] collects every
//! license-bearing node (meta tags, JSON-LD, `<link rel=license>`, anchors to
//! creativecommons.org), [`rank_candidates`] orders them by confidence and
//! [`resolve`] picks the best license and flags conflicts. Mentions in plain
//! prose never produce a candidate.

mod cc;
mod markup;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use url::Url;

pub use cc::{parse_cc_url, CcLicense, Family};
pub use markup::{parse_markup, sniff_encoding, Node, NodeId, NodeKind, NodeTree};

/// Number of trailing top-level body children treated as footer when no
/// explicit footer markup is present.
pub const FOOTER_TAIL: usize = 3;

const SNIPPET_CHARS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    MetaTag,
    JsonLd,
    LinkRel,
    AnchorHref,
}

impl SourceKind {
    pub const ALL: [SourceKind; 4] = [SourceKind::MetaTag, SourceKind::JsonLd, SourceKind::LinkRel, SourceKind::AnchorHref];

    fn priority(self) -> u8 {
        match self {
            SourceKind::MetaTag => 0,
            SourceKind::JsonLd => 1,
            SourceKind::LinkRel => 2,
            SourceKind::AnchorHref => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Head,
    Footer,
    Body,
}

impl Location {
    pub const ALL: [Location; 3] = [Location::Head, Location::Footer, Location::Body];

    fn priority(self) -> u8 {
        match self {
            Location::Head => 0,
            Location::Footer => 1,
            Location::Body => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Location::Head => "head",
            Location::Footer => "footer",
            Location::Body => "body",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LicenseCandidate {
    pub source_kind: SourceKind,
    pub location: Location,
    pub target_url: String,
    pub parsed: Option<CcLicense>,
    pub context_snippet: String,
    /// 1 = most confident; 0 until [`rank_candidates`] assigns it.
    pub rank: u32,
    /// Document-order position of the originating node.
    pub position: usize,
}

impl LicenseCandidate {
    fn sort_key(&self) -> (u8, u8, usize) {
        (self.source_kind.priority(), self.location.priority(), self.position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LicenseAnnotation {
    pub candidates: Vec<LicenseCandidate>,
    pub best: Option<CcLicense>,
    pub best_location: Option<Location>,
    pub conflict: bool,
}

impl LicenseAnnotation {
    pub fn best_family(&self) -> Option<Family> {
        self.best.as_ref().map(|b| b.family)
    }
}

/// Parses `payload` and runs the full extraction: find, rank, resolve.
pub fn annotate(payload: &[u8], charset_hint: Option<&str>, base_url: Option<&str>) -> LicenseAnnotation {
    let tree = parse_markup(payload, charset_hint);
    annotate_tree(&tree, base_url)
}

pub fn annotate_tree(tree: &NodeTree, base_url: Option<&str>) -> LicenseAnnotation {
    resolve(rank_candidates(find_candidates(tree, base_url)))
}

/// Collects one candidate per license-bearing node, in document order.
///
/// Relative `href`s are resolved against `base_url` (or a `<base href>` in the
/// document, which takes precedence) before the URL grammar is applied.
pub fn find_candidates(tree: &NodeTree, base_url: Option<&str>) -> Vec<LicenseCandidate> {
    let base = document_base(tree, base_url);
    let mut out = Vec::new();
    for id in tree.ids() {
        let node = tree.node(id);
        let Some(tag) = node.tag() else { continue };
        let found: Vec<(SourceKind, String)> = match tag {
            "meta" => meta_license(node).map(|u| (SourceKind::MetaTag, u)).into_iter().collect(),
            "script" if is_json_ld(node) => json_ld_licenses(&tree.text_content(id))
                .into_iter()
                .map(|u| (SourceKind::JsonLd, u))
                .collect(),
            "link" if has_rel_license(node) => node
                .attr("href")
                .and_then(|h| resolve_href(h, base.as_ref()))
                .map(|u| (SourceKind::LinkRel, u))
                .into_iter()
                .collect(),
            "a" => node
                .attr("href")
                .and_then(|h| resolve_href(h, base.as_ref()))
                .filter(|u| is_cc_license_link(u))
                .map(|u| (SourceKind::AnchorHref, u))
                .into_iter()
                .collect(),
            _ => Vec::new(),
        };
        for (source_kind, target_url) in found {
            out.push(LicenseCandidate {
                source_kind,
                location: classify_location(tree, id),
                parsed: parse_cc_url(&target_url),
                context_snippet: context_snippet(tree, id, source_kind, &target_url),
                target_url,
                rank: 0,
                position: id.0,
            });
        }
    }
    out
}

fn document_base(tree: &NodeTree, base_url: Option<&str>) -> Option<Url> {
    let page = base_url.and_then(|u| Url::parse(u).ok());
    let declared = tree
        .descendants(tree.head())
        .find(|id| tree.node(*id).tag() == Some("base"))
        .and_then(|id| tree.node(id).attr("href"))
        .and_then(|href| match &page {
            Some(p) => p.join(href.trim()).ok(),
            None => Url::parse(href.trim()).ok(),
        });
    declared.or(page)
}

fn meta_license(node: &Node) -> Option<String> {
    const NAMES: [&str; 3] = ["license", "dcterms.license", "dc.rights"];
    let key = node.attr("name").or_else(|| node.attr("property"))?.trim();
    if !NAMES.iter().any(|n| key.eq_ignore_ascii_case(n)) {
        return None;
    }
    absolute_url(node.attr("content")?)
}

/// Accepts only absolute http(s) or scheme-relative URLs; free-text values are not URLs.
fn absolute_url(value: &str) -> Option<String> {
    let value = value.trim();
    let candidate = if value.starts_with("//") { format!("https:{value}") } else { value.to_string() };
    let url = Url::parse(&candidate).ok()?;
    matches!(url.scheme(), "http" | "https").then(|| url.to_string())
}

fn resolve_href(href: &str, base: Option<&Url>) -> Option<String> {
    let href = href.trim();
    if href.is_empty() || href.starts_with('#') {
        return None;
    }
    if let Some(abs) = absolute_url(href) {
        return Some(abs);
    }
    let joined = base?.join(href).ok()?;
    matches!(joined.scheme(), "http" | "https").then(|| joined.to_string())
}

fn has_rel_license(node: &Node) -> bool {
    node.attr("rel")
        .is_some_and(|rel| rel.split_ascii_whitespace().any(|t| t.eq_ignore_ascii_case("license")))
}

fn is_json_ld(node: &Node) -> bool {
    node.attr("type")
        .is_some_and(|t| t.trim().eq_ignore_ascii_case("application/ld+json"))
}

fn is_cc_license_link(url: &str) -> bool {
    let Ok(parsed) = Url::parse(url) else { return false };
    parsed.host_str().is_some_and(cc::is_cc_host)
        && ["/licenses/", "/publicdomain/", "/certification"]
            .iter()
            .any(|p| parsed.path().starts_with(p))
}

/// Top-level (or `@graph` member) `license` string values of a JSON-LD block.
fn json_ld_licenses(source: &str) -> Vec<String> {
    use serde_json::Value;

    fn from_object(value: &Value, out: &mut Vec<String>) {
        let Some(obj) = value.as_object() else { return };
        if let Some(url) = obj.get("license").and_then(Value::as_str).and_then(absolute_url) {
            out.push(url);
        }
        if let Some(graph) = obj.get("@graph").and_then(Value::as_array) {
            for member in graph {
                if let Some(url) = member.get("license").and_then(Value::as_str).and_then(absolute_url) {
                    out.push(url);
                }
            }
        }
    }

    let Ok(value) = serde_json::from_str::<Value>(source.trim()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    match &value {
        Value::Array(items) => items.iter().for_each(|v| from_object(v, &mut out)),
        v => from_object(v, &mut out),
    }
    out
}

/// Head, footer or body.
///
/// Footer means: inside a `<footer>`, inside an element whose `id` or `class`
/// contains "footer" (case-insensitive), or inside one of the last
/// [`FOOTER_TAIL`] top-level element children of `<body>`.
pub fn classify_location(tree: &NodeTree, node: NodeId) -> Location {
    if tree.is_within(node, tree.head()) {
        return Location::Head;
    }
    let in_footer_markup = std::iter::once(node).chain(tree.ancestors(node)).any(|id| {
        let n = tree.node(id);
        n.tag() == Some("footer")
            || ["id", "class"]
                .iter()
                .filter_map(|a| n.attr(a))
                .any(|v| v.to_ascii_lowercase().contains("footer"))
    });
    if in_footer_markup {
        return Location::Footer;
    }
    let body = tree.body();
    let top_level = std::iter::once(node)
        .chain(tree.ancestors(node))
        .find(|id| tree.node(*id).parent == Some(body));
    if let Some(top) = top_level {
        let elements: Vec<NodeId> = tree
            .node(body)
            .children
            .iter()
            .copied()
            .filter(|c| tree.node(*c).tag().is_some())
            .collect();
        if let Some(idx) = elements.iter().position(|c| *c == top) {
            if idx + FOOTER_TAIL >= elements.len() {
                return Location::Footer;
            }
        }
    }
    Location::Body
}

fn context_snippet(tree: &NodeTree, id: NodeId, kind: SourceKind, target: &str) -> String {
    let node = tree.node(id);
    let raw = match kind {
        SourceKind::MetaTag => format!(
            "<meta {}=\"{}\" content=\"{}\">",
            if node.attr("name").is_some() { "name" } else { "property" },
            node.attr("name").or_else(|| node.attr("property")).unwrap_or_default(),
            target
        ),
        SourceKind::JsonLd => format!("application/ld+json license: {target}"),
        SourceKind::LinkRel if tree.is_within(id, tree.head()) => format!("<link rel=\"license\" href=\"{target}\">"),
        SourceKind::LinkRel | SourceKind::AnchorHref => {
            // Text of the nearest enclosing element that has any.
            std::iter::once(id)
                .chain(tree.ancestors(id))
                .take_while(|a| *a != tree.body())
                .map(|a| tree.text_content(a))
                .find(|t| !t.trim().is_empty())
                .unwrap_or_else(|| target.to_string())
        }
    };
    truncate_chars(&raw.split_whitespace().collect::<Vec<_>>().join(" "), SNIPPET_CHARS)
}

fn truncate_chars(s: &str, max: usize) -> String {
    s.chars().take(max).collect()
}

/// Orders by source kind (meta > JSON-LD > link > anchor), then location
/// (head > footer > body), then document order, and assigns ranks 1..n.
pub fn rank_candidates(mut candidates: Vec<LicenseCandidate>) -> Vec<LicenseCandidate> {
    candidates.sort_by_key(LicenseCandidate::sort_key);
    for (i, c) in candidates.iter_mut().enumerate() {
        c.rank = i as u32 + 1;
    }
    candidates
}

pub fn resolve(candidates: Vec<LicenseCandidate>) -> LicenseAnnotation {
    let best = candidates.iter().find(|c| c.parsed.is_some());
    let families: BTreeSet<Family> = candidates.iter().filter_map(|c| c.parsed.as_ref()).map(|p| p.family).collect();
    LicenseAnnotation {
        best: best.and_then(|c| c.parsed.clone()),
        best_location: best.map(|c| c.location),
        conflict: families.len() >= 2,
        candidates,
    }
}
