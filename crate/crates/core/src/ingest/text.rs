use crate::license::{NodeId, NodeKind, NodeTree};

const SKIPPED: [&str; 7] = ["script", "style", "noscript", "template", "head", "iframe", "svg"];

const BLOCKS: [&str; 37] = [
    "address", "article", "aside", "blockquote", "br", "caption", "dd", "details", "dialog", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li",
    "main", "nav", "ol", "p", "pre", "section", "summary", "table", "tr", "td", "ul",
];

/// Visible text of the body: scripts, styles and comments are dropped,
/// block boundaries become newlines and whitespace runs inside a line
/// collapse to a single space.
pub fn extract_text(tree: &NodeTree) -> String {
    let mut lines: Vec<String> = Vec::new();
    let mut current = String::new();
    walk(tree, tree.body(), &mut lines, &mut current);
    flush(&mut lines, &mut current);
    lines.join("\n")
}

fn flush(lines: &mut Vec<String>, current: &mut String) {
    let line = current.split_whitespace().collect::<Vec<_>>().join(" ");
    if !line.is_empty() {
        lines.push(line);
    }
    current.clear();
}

// Iterative so pathological nesting cannot overflow the stack.
fn walk(tree: &NodeTree, start: NodeId, lines: &mut Vec<String>, current: &mut String) {
    enum Visit {
        Enter(NodeId),
        Leave,
    }
    let mut stack = vec![Visit::Enter(start)];
    while let Some(visit) = stack.pop() {
        match visit {
            Visit::Leave => flush(lines, current),
            Visit::Enter(id) => match &tree.node(id).kind {
                NodeKind::Text(t) => current.push_str(t),
                NodeKind::Comment(_) => {}
                NodeKind::Document => {
                    stack.extend(tree.node(id).children.iter().rev().map(|c| Visit::Enter(*c)));
                }
                NodeKind::Element { tag, .. } => {
                    if SKIPPED.contains(&tag.as_str()) {
                        continue;
                    }
                    let block = BLOCKS.contains(&tag.as_str());
                    if block {
                        flush(lines, current);
                        stack.push(Visit::Leave);
                    } else if matches!(tag.as_str(), "th" | "img" | "input") {
                        current.push(' ');
                    }
                    stack.extend(tree.node(id).children.iter().rev().map(|c| Visit::Enter(*c)));
                }
            },
        }
    }
}
