//! Final clean-up of approved collections: personal data, harmful language
//! and duplicates, plus sampled audits of the scrubbing.
//!
//! Scrubbing runs before deduplication, so documents that differ only in
//! personal data can merge.

pub mod audit;
pub mod dedup;
pub mod harmful;
pub mod pii;

pub use audit::{pii_audit_sample, AuditBundle, AuditEdit, AuditEntry, DEFAULT_AUDIT_SIZE};
pub use dedup::{deduplicate, deduplicate_with, DedupConfig, DedupReport, Deduplicator, DroppedDoc, DupKind};
pub use harmful::{filter_harmful, flag_harmful, HarmFlag, HarmReport, HarmfulAction, Hit, Severity, Wordlist};
pub use pii::{detect_pii, scrub_document, scrub_pii, PiiClass, ScrubReport};
