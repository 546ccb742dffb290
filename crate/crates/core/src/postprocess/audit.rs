//! Sampled before/after bundles for manual review of PII scrubbing.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::pii::{scrub_detailed, PiiClass};
use crate::curate::sample_representative;
use crate::document::Document;

pub const DEFAULT_AUDIT_SIZE: usize = 100;
const CONTEXT_CHARS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEdit {
    pub class: PiiClass,
    /// Byte offsets into `before`.
    pub start: usize,
    pub end: usize,
    pub original: String,
    pub replacement: String,
    pub context_before: String,
    pub context_after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub doc_id: String,
    pub url: String,
    pub before: String,
    pub after: String,
    pub edits: Vec<AuditEdit>,
}

impl AuditEntry {
    /// Applies the edits to `before`. For a sound entry this equals `after`.
    pub fn apply_edits(&self) -> String {
        let mut out = String::with_capacity(self.before.len());
        let mut last = 0;
        for e in &self.edits {
            out.push_str(&self.before[last..e.start]);
            out.push_str(&e.replacement);
            last = e.end;
        }
        out.push_str(&self.before[last..]);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditBundle {
    pub seed: u64,
    pub requested: usize,
    pub population: usize,
    pub entries: Vec<AuditEntry>,
}

fn tail(s: &str, n: usize) -> &str {
    match s.char_indices().rev().nth(n.saturating_sub(1)) {
        Some((i, _)) if n > 0 => &s[i..],
        _ if n == 0 => "",
        _ => s,
    }
}

fn head(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

pub fn audit_entry(doc: &Document) -> AuditEntry {
    let scrubbed = scrub_detailed(&doc.text);
    let edits = scrubbed
        .replacements
        .into_iter()
        .map(|r| AuditEdit {
            context_before: tail(&doc.text[..r.start], CONTEXT_CHARS).to_string(),
            context_after: head(&doc.text[r.end..], CONTEXT_CHARS).to_string(),
            class: r.class,
            start: r.start,
            end: r.end,
            original: r.original,
            replacement: r.placeholder,
        })
        .collect();
    AuditEntry { doc_id: doc.doc_id.clone(), url: doc.url.clone(), before: doc.text.clone(), after: scrubbed.text, edits }
}

/// Draws a uniform sample of `n` documents (all of them if fewer) and
/// records what scrubbing changes in each. `docs` are the unscrubbed
/// originals, since placeholders cannot be reversed.
pub fn pii_audit_sample(docs: &[Document], n: usize, seed: u64) -> AuditBundle {
    let mut picked = sample_representative(docs.iter(), n, seed);
    picked.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    AuditBundle {
        seed,
        requested: n,
        population: docs.len(),
        entries: picked.into_iter().map(audit_entry).collect(),
    }
}

impl AuditBundle {
    /// Markdown for a reviewer: one section per document, one line per replacement.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let edits: usize = self.entries.iter().map(|e| e.edits.len()).sum();
        let _ = writeln!(
            out,
            "# PII audit\n\nseed {}, {} of {} documents, {} replacements\n",
            self.seed,
            self.entries.len(),
            self.population,
            edits
        );
        for e in &self.entries {
            let _ = writeln!(out, "## {}\n\n{}\n", e.doc_id, e.url);
            if e.edits.is_empty() {
                out.push_str("no replacements\n\n");
                continue;
            }
            for ed in &e.edits {
                let _ = writeln!(
                    out,
                    "- {} `{}` → `{}`: …{}**{}**{}…",
                    ed.class.name(),
                    ed.original,
                    ed.replacement,
                    ed.context_before.replace('\n', " "),
                    ed.original,
                    ed.context_after.replace('\n', " ")
                );
            }
            out.push('\n');
        }
        out
    }
}
