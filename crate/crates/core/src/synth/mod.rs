//! Synthetic text built deterministically from traceable sources: template
//! verbalization of knowledge-graph triples and transcript cleaning.
//!
//! Rewriting and translation models are not part of this crate. They plug in
//! through [`Paraphraser`] and [`Translator`], which tag every output with
//! its provenance.

mod template;
mod transcript;

use std::collections::BTreeSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use template::{Template, TemplateSet, OBJECT_SLOT, SUBJECT_SLOT};
pub use transcript::clean_transcript;

const BUNDLED_BLOCKLIST: &str = include_str!("../../data/synth/default_blocklist.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub subject_label: String,
    pub predicate_id: String,
    pub object_label: String,
    pub subject_is_person: bool,
    pub subject_has_encyclopedia_page: bool,
}

impl Triple {
    /// A triple about something that is not a person.
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: impl Into<String>) -> Self {
        Triple {
            subject_label: subject.into(),
            predicate_id: predicate.into(),
            object_label: object.into(),
            subject_is_person: false,
            subject_has_encyclopedia_page: false,
        }
    }

    pub fn person(mut self, has_page: bool) -> Self {
        self.subject_is_person = true;
        self.subject_has_encyclopedia_page = has_page;
        self
    }
}

fn flag(field: &str, line: usize) -> Result<bool> {
    match field.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::InvalidDocument { line, reason: format!("expected 0 or 1, got {other:?}") }),
    }
}

/// Reads `subject<TAB>predicate<TAB>object<TAB>is_person<TAB>has_page` lines.
/// Blank lines and `#` comments are skipped.
pub fn read_triples<R: BufRead>(reader: R) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::InvalidDocument { line: n, reason: format!("expected 5 tab-separated fields, got {}", fields.len()) });
        }
        let triple = Triple {
            subject_label: fields[0].trim().to_string(),
            predicate_id: fields[1].trim().to_string(),
            object_label: fields[2].trim().to_string(),
            subject_is_person: flag(fields[3], n)?,
            subject_has_encyclopedia_page: flag(fields[4], n)?,
        };
        if triple.subject_label.is_empty() || triple.predicate_id.is_empty() || triple.object_label.is_empty() {
            return Err(Error::InvalidDocument { line: n, reason: "empty label or predicate".into() });
        }
        out.push(triple);
    }
    Ok(out)
}

/// Keeps a triple unless its subject is a person without an encyclopedia page.
pub fn filter_person_privacy(triple: &Triple) -> bool {
    !triple.subject_is_person || triple.subject_has_encyclopedia_page
}

/// Keeps a triple unless its predicate is blocklisted.
pub fn filter_trivial(triple: &Triple, blocklist: &BTreeSet<String>) -> bool {
    !blocklist.contains(&triple.predicate_id)
}

/// One predicate id per line; blank lines and `#` comments are skipped.
pub fn parse_blocklist(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// The shipped blocklist of identifier, media and category predicates.
pub fn default_blocklist() -> BTreeSet<String> {
    parse_blocklist(BUNDLED_BLOCKLIST)
}

fn ends_sentence(s: &str) -> bool {
    s.trim_end().ends_with(['.', '!', '?', '…'])
}

/// Fills the predicate's template, appending a full stop if the result does
/// not already end a sentence. `None` when no template exists.
pub fn verbalize(triple: &Triple, templates: &TemplateSet) -> Option<String> {
    let template = templates.get(&triple.predicate_id)?;
    let mut sentence = template.fill(&triple.subject_label, &triple.object_label).trim_end().to_string();
    if !ends_sentence(&sentence) {
        sentence.push('.');
    }
    Some(sentence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    pub predicate_id: String,
    pub language: String,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SynthStats {
    pub input: usize,
    pub dropped_privacy: usize,
    pub dropped_trivial: usize,
    pub no_template: usize,
    pub verbalized: usize,
}

/// Privacy filter, then triviality filter, then verbalization.
pub fn verbalize_all<'a>(
    triples: impl IntoIterator<Item = &'a Triple>,
    templates: &TemplateSet,
    blocklist: &BTreeSet<String>,
) -> (Vec<Sentence>, SynthStats) {
    let mut stats = SynthStats::default();
    let mut out = Vec::new();
    for t in triples {
        stats.input += 1;
        if !filter_person_privacy(t) {
            stats.dropped_privacy += 1;
            continue;
        }
        if !filter_trivial(t, blocklist) {
            stats.dropped_trivial += 1;
            continue;
        }
        match verbalize(t, templates) {
            Some(text) => {
                stats.verbalized += 1;
                out.push(Sentence {
                    text,
                    predicate_id: t.predicate_id.clone(),
                    language: templates.language.clone(),
                    provenance: format!("template:{}:{}", templates.language, t.predicate_id),
                });
            }
            None => stats.no_template += 1,
        }
    }
    (out, stats)
}

/// Text together with a description of how it was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenanced {
    pub text: String,
    pub provenance: String,
}

pub trait Paraphraser {
    fn paraphrase(&self, text: &str) -> Provenanced;
}

pub trait Translator {
    fn translate(&self, text: &str, source_language: &str, target_language: &str) -> Provenanced;
}

/// Returns its input unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Paraphraser for Identity {
    fn paraphrase(&self, text: &str) -> Provenanced {
        Provenanced { text: text.to_string(), provenance: "identity".into() }
    }
}

impl Translator for Identity {
    fn translate(&self, text: &str, source_language: &str, target_language: &str) -> Provenanced {
        Provenanced { text: text.to_string(), provenance: format!("identity:{source_language}->{target_language}") }
    }
}
