//! Collection metadata, risk records, threshold configs and domain verdicts,
//! kept in an append-only event log.
//!
//! On disk a registry is a directory:
//!
//! ```text
//! events.jsonl          append-only log, the source of truth
//! snapshot.json         state derived from the log, rewritten after each event
//! configs/<id>.json     current threshold config per collection
//! samples/<id>.jsonl    scored documents used for bucket reports
//! ```
//!
//! Every mutation is validated, appended to the log, and only then applied,
//! so replaying the log always reproduces the current state.

pub mod api;
mod store;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::curate::ThresholdConfig;
use crate::error::{Error, Result};
use crate::policy::{DomainLedger, Verdict};

pub use store::{Registry, RegistryState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LicenseBasis {
    PublicDomain,
    Cc0,
    CcBy,
    Consented,
    CodePermissive,
}

impl LicenseBasis {
    pub const ALL: [LicenseBasis; 5] = [
        LicenseBasis::PublicDomain,
        LicenseBasis::Cc0,
        LicenseBasis::CcBy,
        LicenseBasis::Consented,
        LicenseBasis::CodePermissive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LicenseBasis::PublicDomain => "public_domain",
            LicenseBasis::Cc0 => "cc0",
            LicenseBasis::CcBy => "cc_by",
            LicenseBasis::Consented => "consented",
            LicenseBasis::CodePermissive => "code_permissive",
        }
    }
}

impl FromStr for LicenseBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LicenseBasis::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown license basis {s:?}")))
    }
}

/// Descriptive metadata for one collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectionRecord {
    pub collection_id: String,
    pub source_description: String,
    pub license_basis: LicenseBasis,
    /// Tokens per language code; `other` collects the rest.
    #[serde(default)]
    pub language_breakdown: BTreeMap<String, u64>,
    #[serde(default)]
    pub token_count: u64,
    #[serde(default)]
    pub word_count: u64,
    #[serde(default)]
    pub provenance_notes: String,
    /// Set by the registry; 1 for the first registration.
    #[serde(default)]
    pub version: u64,
}

impl CollectionRecord {
    pub fn new(collection_id: impl Into<String>, source_description: impl Into<String>, license_basis: LicenseBasis) -> Self {
        CollectionRecord {
            collection_id: collection_id.into(),
            source_description: source_description.into(),
            license_basis,
            language_breakdown: BTreeMap::new(),
            token_count: 0,
            word_count: 0,
            provenance_notes: String::new(),
            version: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.collection_id.trim().is_empty() {
            return Err(Error::config("collection_id is empty"));
        }
        if self.collection_id.contains(['/', '\\']) || self.collection_id.starts_with('.') {
            return Err(Error::config(format!("collection_id {:?} is not usable as a file name", self.collection_id)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskLevel {
    Low,
    Medium,
    High,
}

impl RiskLevel {
    pub const ALL: [RiskLevel; 3] = [RiskLevel::Low, RiskLevel::Medium, RiskLevel::High];

    pub fn as_str(self) -> &'static str {
        match self {
            RiskLevel::Low => "low",
            RiskLevel::Medium => "medium",
            RiskLevel::High => "high",
        }
    }
}

impl fmt::Display for RiskLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RiskLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RiskLevel::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown risk level {s:?}")))
    }
}

/// Sampling weight per risk level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskWeights {
    pub low: f64,
    pub medium: f64,
    pub high: f64,
}

impl Default for RiskWeights {
    fn default() -> Self {
        RiskWeights { low: 1.0, medium: 0.5, high: 0.1 }
    }
}

impl RiskWeights {
    /// Every weight in (0, 1] and high ≤ medium ≤ low.
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("low", self.low), ("medium", self.medium), ("high", self.high)] {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::config(format!("{name} weight {w} outside (0, 1]")));
            }
        }
        if !(self.high <= self.medium && self.medium <= self.low) {
            return Err(Error::config("risk weights must not increase with risk"));
        }
        Ok(())
    }

    pub fn weight(&self, risk: RiskLevel) -> f64 {
        match risk {
            RiskLevel::Low => self.low,
            RiskLevel::Medium => self.medium,
            RiskLevel::High => self.high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRecord {
    pub collection_id: String,
    pub risk: RiskLevel,
    pub rationale: String,
    pub sampling_weight: f64,
    /// A rejected collection is removed from the corpus.
    #[serde(default)]
    pub rejected: bool,
}

/// A logged mutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    CollectionRegistered { record: CollectionRecord },
    CollectionUpdated { record: CollectionRecord },
    RiskWeightsSet { weights: RiskWeights },
    RiskAssigned { record: RiskRecord },
    ThresholdsSet { config: ThresholdConfig },
    SampleStored { collection_id: String, documents: usize, sha256: String },
    LedgerImported { ledger: DomainLedger, min_words: u64 },
    VerdictRecorded { verdict: Verdict },
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::CollectionRegistered { .. } => "collection_registered",
            Event::CollectionUpdated { .. } => "collection_updated",
            Event::RiskWeightsSet { .. } => "risk_weights_set",
            Event::RiskAssigned { .. } => "risk_assigned",
            Event::ThresholdsSet { .. } => "thresholds_set",
            Event::SampleStored { .. } => "sample_stored",
            Event::LedgerImported { .. } => "ledger_imported",
            Event::VerdictRecorded { .. } => "verdict_recorded",
        }
    }
}

/// One line of `events.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub seq: u64,
    pub time: DateTime<Utc>,
    #[serde(flatten)]
    pub event: Event,
}

/// Table-style example record for a large municipal-documents collection.
pub fn example_collection() -> CollectionRecord {
    let mut r = CollectionRecord::new("openraadsinformatie", "Municipal council documentation", LicenseBasis::PublicDomain);
    r.language_breakdown = BTreeMap::from([
        ("nl".to_string(), 14_100_000_000),
        ("en".to_string(), 20_000_000),
        ("other".to_string(), 10_000_000),
    ]);
    r.token_count = r.language_breakdown.values().sum();
    r.provenance_notes = "council meeting documents sourced through an open-data foundation".into();
    r
}
