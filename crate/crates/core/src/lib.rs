//! Creative Commons license extraction and corpus curation.
//!
//! The crate is organised along the stages a document passes through:
//!
//! - [`ingest`]: WARC / JSONL readers, visible-text extraction, language retention.
//! - [`license`]: error-tolerant markup parsing and structural CC license extraction.
//! - [`langid`]: character n-gram language scoring.
//! - [`curate`]: normalization, heuristic quality scores, thresholds, sampling, buckets.
//! - [`policy`]: the domain-level permissive-license policy and verification queue.
//! - [`postprocess`]: PII scrubbing, harmful-language flagging, deduplication, audits.
//! - [`synth`]: triple verbalization and transcript cleaning.
//! - [`registry`]: collection metadata, risk weights, the audited event store and review API.
//! - [`pipeline`]: end-to-end composition used by the CLI.

pub mod curate;
pub mod document;
pub mod error;
pub mod ingest;
pub mod langid;
pub mod license;
pub mod pipeline;
pub mod policy;
pub mod postprocess;
pub mod registry;
pub mod synth;

pub use document::{Document, Stage};
pub use error::{Error, Result};
