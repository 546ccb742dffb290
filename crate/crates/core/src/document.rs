//! The unit record that flows through every stage of the pipeline.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use url::Url;

use crate::curate::QualityScores;
use crate::langid::LanguageScores;
use crate::license::LicenseAnnotation;
use crate::{Error, Result};

/// Processing stage. Transitions only move forward in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    #[default]
    Raw,
    Normalized,
    Scored,
    Filtered,
    Postprocessed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub url: String,
    #[serde(default)]
    pub domain: String,
    pub collection_id: String,
    pub text: String,
    #[serde(default)]
    pub word_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language_scores: Option<LanguageScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_scores: Option<QualityScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<LicenseAnnotation>,
    #[serde(default)]
    pub stage: Stage,
}

impl Document {
    /// Builds a raw document, deriving `doc_id`, `domain` and `word_count`.
    pub fn new(collection_id: impl Into<String>, url: impl Into<String>, text: impl Into<String>) -> Self {
        let collection_id = collection_id.into();
        let url = url.into();
        let text = text.into();
        Document {
            doc_id: doc_id(&collection_id, &url, &text),
            domain: registrable_domain(&url).unwrap_or_default(),
            word_count: word_count(&text),
            url,
            collection_id,
            text,
            language_scores: None,
            quality_scores: None,
            license: None,
            stage: Stage::Raw,
        }
    }

    /// Replaces the text and keeps `word_count` in sync. The id is left
    /// untouched so a document keeps its identity across stages.
    pub fn set_text(&mut self, text: String) {
        self.word_count = word_count(&text);
        self.text = text;
    }

    /// Moves to `stage`; moving backwards is ignored.
    pub fn advance(&mut self, stage: Stage) {
        if stage > self.stage {
            self.stage = stage;
        }
    }

    /// Parses one JSONL line, filling in derivable fields that are absent.
    pub fn from_json_line(line: &str) -> serde_json::Result<Self> {
        let mut doc: Document = serde_json::from_str(line)?;
        if doc.domain.is_empty() {
            doc.domain = registrable_domain(&doc.url).unwrap_or_default();
        }
        doc.word_count = word_count(&doc.text);
        Ok(doc)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }
}

/// Lowercase hex SHA-256 over the length-prefixed `(collection_id, url, text)` triple.
pub fn doc_id(collection_id: &str, url: &str, text: &str) -> String {
    let mut hasher = Sha256::new();
    for part in [collection_id, url, text] {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    hex_lower(&hasher.finalize())
}

pub(crate) fn hex_lower(bytes: &[u8]) -> String {
    use std::fmt::Write;
    bytes.iter().fold(String::with_capacity(bytes.len() * 2), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Registrable domain (public suffix + one label) of an absolute URL.
///
/// Hosts without a known suffix (IP literals, `localhost`) map to the host itself.
pub fn registrable_domain(url: &str) -> Result<String> {
    let parsed = Url::parse(url).map_err(|e| Error::config(format!("invalid url `{url}`: {e}")))?;
    let host = parsed
        .host_str()
        .ok_or_else(|| Error::config(format!("url `{url}` has no host")))?
        .trim_end_matches('.')
        .to_ascii_lowercase();
    if parsed.domain().is_none() {
        return Ok(host);
    }
    Ok(psl::domain_str(&host).map(str::to_owned).unwrap_or(host))
}
