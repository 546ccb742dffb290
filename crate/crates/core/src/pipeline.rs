//! End-to-end ingest: archive records to scored documents, with
//! per-language document and word counts.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::curate::score_document;
use crate::document::Document;
use crate::error::Result;
use crate::ingest::{read_archive, record_to_document, retain_language, ArchiveFormat, ArchiveStats};
use crate::langid::LanguageProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LanguageCount {
    pub documents: u64,
    pub words: u64,
}

/// Counts from one run, keyed by top language.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunCounts {
    pub records: u64,
    pub malformed: u64,
    pub skipped_non_html: u64,
    pub retained: u64,
    pub dropped_language: u64,
    pub per_language: BTreeMap<String, LanguageCount>,
}

impl RunCounts {
    fn absorb(&mut self, stats: &ArchiveStats) {
        self.records += stats.yielded as u64;
        self.malformed += stats.malformed as u64;
        self.skipped_non_html += stats.non_html as u64;
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counts serialize")
    }
}

/// Reads every archive, builds documents, scores them and keeps those whose
/// top language is in `languages`. `sink` receives each retained document.
pub fn run_archives<R, F>(
    archives: impl IntoIterator<Item = (R, ArchiveFormat)>,
    collection_id: &str,
    profiles: &[LanguageProfile],
    languages: &BTreeSet<String>,
    mut sink: F,
) -> Result<RunCounts>
where
    R: Read + 'static,
    F: FnMut(Document) -> Result<()>,
{
    let mut counts = RunCounts::default();
    for (stream, format) in archives {
        let mut archive = read_archive(stream, format)?;
        for record in archive.by_ref() {
            let record = record?;
            let mut doc = record_to_document(&record, collection_id);
            score_document(&mut doc, profiles);
            if !retain_language(&doc, languages)? {
                counts.dropped_language += 1;
                continue;
            }
            counts.retained += 1;
            let lang = doc.language_scores.as_ref().map(|s| s.top.clone()).unwrap_or_default();
            let slot = counts.per_language.entry(lang).or_default();
            slot.documents += 1;
            slot.words += doc.word_count as u64;
            sink(doc)?;
        }
        counts.absorb(archive.stats());
    }
    Ok(counts)
}
