//! Error-tolerant markup parsing into an owned, arena-backed node tree.
//!
//! Tree construction is delegated to html5ever (through `scraper`), which
//! implements the WHATWG recovery rules; this module resolves the charset and
//! converts the result into a [`NodeTree`] with guaranteed `head` and `body`
//! regions.

use std::fmt::Write;

use encoding_rs::Encoding;
use regex::bytes::Regex;
use std::sync::OnceLock;

/// Index of a node inside its [`NodeTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Document,
    Element { tag: String, attrs: Vec<(String, String)> },
    Text(String),
    Comment(String),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

impl Node {
    pub fn tag(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Element { tag, .. } => Some(tag),
            _ => None,
        }
    }

    /// Attribute lookup, case-insensitive on the name.
    pub fn attr(&self, name: &str) -> Option<&str> {
        match &self.kind {
            NodeKind::Element { attrs, .. } => attrs
                .iter()
                .find(|(k, _)| k.eq_ignore_ascii_case(name))
                .map(|(_, v)| v.as_str()),
            _ => None,
        }
    }

    pub fn text(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Text(t) => Some(t),
            _ => None,
        }
    }
}

/// A parsed document. Node ids are assigned in document (pre-)order.
#[derive(Debug, Clone)]
pub struct NodeTree {
    nodes: Vec<Node>,
    head: NodeId,
    body: NodeId,
}

impl NodeTree {
    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn head(&self) -> NodeId {
        self.head
    }

    pub fn body(&self) -> NodeId {
        self.body
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    /// All node ids in document order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Ancestors of `id`, nearest first, excluding `id` itself.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(self.node(id).parent, move |p| self.node(*p).parent)
    }

    /// Descendants of `id` in document order, excluding `id`.
    pub fn descendants(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let mut stack: Vec<NodeId> = self.node(id).children.iter().rev().copied().collect();
        std::iter::from_fn(move || {
            let next = stack.pop()?;
            stack.extend(self.node(next).children.iter().rev().copied());
            Some(next)
        })
    }

    pub fn is_within(&self, id: NodeId, ancestor: NodeId) -> bool {
        id == ancestor || self.ancestors(id).any(|a| a == ancestor)
    }

    /// Concatenated text of all descendant text nodes.
    pub fn text_content(&self, id: NodeId) -> String {
        self.descendants(id)
            .filter_map(|d| self.node(d).text())
            .collect()
    }

    /// Serializes the tree back to HTML.
    pub fn to_html(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root(), &mut out);
        out
    }

    fn write_node(&self, id: NodeId, out: &mut String) {
        let node = self.node(id);
        match &node.kind {
            NodeKind::Document => {
                out.push_str("<!DOCTYPE html>");
                for c in &node.children {
                    self.write_node(*c, out);
                }
            }
            NodeKind::Element { tag, attrs } => {
                let _ = write!(out, "<{tag}");
                for (k, v) in attrs {
                    let _ = write!(out, " {k}=\"{}\"", escape(v, true));
                }
                out.push('>');
                if is_void(tag) {
                    return;
                }
                let raw = matches!(tag.as_str(), "script" | "style");
                for c in &node.children {
                    match (&self.node(*c).kind, raw) {
                        (NodeKind::Text(t), true) => out.push_str(t),
                        _ => self.write_node(*c, out),
                    }
                }
                let _ = write!(out, "</{tag}>");
            }
            NodeKind::Text(t) => out.push_str(&escape(t, false)),
            NodeKind::Comment(c) => {
                let _ = write!(out, "<!--{c}-->");
            }
        }
    }
}

fn escape(s: &str, attr: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attr => out.push_str("&quot;"),
            '\u{a0}' => out.push_str("&nbsp;"),
            c => out.push(c),
        }
    }
    out
}

fn is_void(tag: &str) -> bool {
    matches!(
        tag,
        "area" | "base" | "br" | "col" | "embed" | "hr" | "img" | "input" | "link" | "meta" | "source" | "track" | "wbr"
    )
}

/// Parses `payload` as HTML. Never fails: malformed input is repaired and
/// undecodable bytes become U+FFFD.
///
/// The charset is taken from, in order: a byte-order mark, `charset_hint`,
/// a `<meta>` declaration within the first 1024 bytes, and finally UTF-8.
pub fn parse_markup(payload: &[u8], charset_hint: Option<&str>) -> NodeTree {
    let encoding = sniff_encoding(payload, charset_hint);
    let (text, _, _) = encoding.decode(payload);
    let html = scraper::Html::parse_document(&text);
    convert(&html)
}

pub fn sniff_encoding(payload: &[u8], charset_hint: Option<&str>) -> &'static Encoding {
    if let Some((enc, _)) = Encoding::for_bom(payload) {
        return enc;
    }
    if let Some(enc) = charset_hint.and_then(|h| Encoding::for_label(h.trim().as_bytes())) {
        return enc;
    }
    meta_charset(&payload[..payload.len().min(1024)]).unwrap_or(encoding_rs::UTF_8)
}

fn meta_charset(prefix: &[u8]) -> Option<&'static Encoding> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r#"(?i-u)<meta[^>]*?charset\s*=\s*["']?\s*([a-zA-Z0-9_:.\-]+)"#).expect("valid regex")
    });
    let label = re.captures(prefix)?.get(1)?.as_bytes();
    let enc = Encoding::for_label(label)?;
    // A meta declaration cannot select a UTF-16 variant; the bytes would not
    // have been readable as ASCII in the first place.
    if enc == encoding_rs::UTF_16LE || enc == encoding_rs::UTF_16BE {
        return Some(encoding_rs::UTF_8);
    }
    Some(enc)
}

fn convert(html: &scraper::Html) -> NodeTree {
    use scraper::Node as S;

    let mut nodes: Vec<Node> = Vec::new();
    // (source node, parent in the new arena)
    let mut stack = vec![(html.tree.root(), None::<NodeId>)];
    while let Some((src, parent)) = stack.pop() {
        let kind = match src.value() {
            S::Document | S::Fragment => NodeKind::Document,
            S::Element(el) => NodeKind::Element {
                tag: el.name().to_ascii_lowercase(),
                attrs: el.attrs().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            },
            S::Text(t) => NodeKind::Text(t.to_string()),
            S::Comment(c) => NodeKind::Comment(c.to_string()),
            S::Doctype(_) | S::ProcessingInstruction(_) => continue,
        };
        let id = NodeId(nodes.len());
        nodes.push(Node { kind, parent, children: Vec::new() });
        if let Some(p) = parent {
            nodes[p.0].children.push(id);
        }
        let children: Vec<_> = src.children().collect();
        for child in children.into_iter().rev() {
            stack.push((child, Some(id)));
        }
    }
    if nodes.is_empty() {
        nodes.push(Node { kind: NodeKind::Document, parent: None, children: Vec::new() });
    }
    let mut tree = NodeTree { nodes, head: NodeId(0), body: NodeId(0) };
    tree.head = tree.ensure_region("head");
    tree.body = tree.ensure_region("body");
    tree
}

impl NodeTree {
    /// Finds the `head`/`body` element under `<html>`, appending an empty one if missing.
    fn ensure_region(&mut self, name: &str) -> NodeId {
        let html = self.ensure_html();
        if let Some(found) = self.node(html).children.iter().copied().find(|c| self.node(*c).tag() == Some(name)) {
            return found;
        }
        self.push_child(html, NodeKind::Element { tag: name.to_string(), attrs: Vec::new() })
    }

    fn ensure_html(&mut self) -> NodeId {
        let root = self.root();
        if let Some(found) = self.node(root).children.iter().copied().find(|c| self.node(*c).tag() == Some("html")) {
            return found;
        }
        self.push_child(root, NodeKind::Element { tag: "html".to_string(), attrs: Vec::new() })
    }

    fn push_child(&mut self, parent: NodeId, kind: NodeKind) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { kind, parent: Some(parent), children: Vec::new() });
        self.nodes[parent.0].children.push(id);
        id
    }
}
