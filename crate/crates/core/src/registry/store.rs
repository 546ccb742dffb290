use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::Utc;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CollectionRecord, Event, LogEntry, RiskLevel, RiskRecord, RiskWeights};
use crate::curate::{bucketize, default_edges, BucketReport, ThresholdConfig, DEFAULT_BUCKETS};
use crate::document::{hex_lower, Document};
use crate::error::{Error, Result};
use crate::ingest::{read_documents, write_documents};
use crate::policy::{
    apply_verdicts, build_verification_queue, DomainLedger, DomainLedgerEntry, DomainStatus, VerificationQueue, Verdict,
    DEFAULT_MIN_WORDS,
};

const EVENTS: &str = "events.jsonl";
const SNAPSHOT: &str = "snapshot.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleInfo {
    pub documents: usize,
    pub sha256: String,
}

/// Everything derivable from the event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryState {
    pub last_seq: u64,
    /// Every version of every collection record, oldest first.
    pub collections: BTreeMap<String, Vec<CollectionRecord>>,
    pub risk_weights: RiskWeights,
    pub risks: BTreeMap<String, RiskRecord>,
    pub thresholds: BTreeMap<String, ThresholdConfig>,
    pub samples: BTreeMap<String, SampleInfo>,
    pub ledger: DomainLedger,
    pub min_words: u64,
}

impl Default for RegistryState {
    fn default() -> Self {
        RegistryState {
            last_seq: 0,
            collections: BTreeMap::new(),
            risk_weights: RiskWeights::default(),
            risks: BTreeMap::new(),
            thresholds: BTreeMap::new(),
            samples: BTreeMap::new(),
            ledger: DomainLedger::default(),
            min_words: DEFAULT_MIN_WORDS,
        }
    }
}

impl RegistryState {
    pub fn collection(&self, id: &str) -> Option<&CollectionRecord> {
        self.collections.get(id).and_then(|h| h.last())
    }

    pub fn history(&self, id: &str) -> &[CollectionRecord] {
        self.collections.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    fn require_collection(&self, id: &str) -> Result<&CollectionRecord> {
        self.collection(id).ok_or_else(|| Error::NotFound(format!("collection `{id}`")))
    }

    pub fn threshold_version(&self, id: &str) -> u64 {
        self.thresholds.get(id).map_or(0, |c| c.version)
    }

    /// The verification queue for the current ledger, as the policy module computes it.
    pub fn queue(&self) -> VerificationQueue {
        let mut ledger = self.ledger.clone();
        build_verification_queue(&mut ledger, self.min_words)
    }

    /// One verdict per `verified_permissive` domain, in domain order.
    pub fn allowlist(&self) -> Vec<Verdict> {
        self.ledger
            .entries()
            .filter(|e| e.status == DomainStatus::VerifiedPermissive)
            .map(|e| Verdict {
                domain: e.domain.clone(),
                status: e.status,
                verdict_note: e.verdict_note.clone(),
                verdict_time: e.verdict_time,
                reviewer: String::new(),
            })
            .collect()
    }

    /// Rejects events that would break an invariant.
    pub fn check(&self, event: &Event) -> Result<()> {
        match event {
            Event::CollectionRegistered { record } => {
                record.validate()?;
                if self.collections.contains_key(&record.collection_id) {
                    return Err(Error::Conflict(format!("collection `{}` already registered", record.collection_id)));
                }
                if record.version != 1 {
                    return Err(Error::Conflict(format!("first version must be 1, got {}", record.version)));
                }
            }
            Event::CollectionUpdated { record } => {
                record.validate()?;
                let current = self.require_collection(&record.collection_id)?;
                if record.version != current.version + 1 {
                    return Err(Error::Conflict(format!(
                        "collection `{}` is at version {}, update carries {}",
                        record.collection_id, current.version, record.version
                    )));
                }
            }
            Event::RiskWeightsSet { weights } => weights.validate()?,
            Event::RiskAssigned { record } => {
                self.require_collection(&record.collection_id)?;
                if !(record.sampling_weight > 0.0 && record.sampling_weight <= 1.0) {
                    return Err(Error::config(format!("sampling weight {} outside (0, 1]", record.sampling_weight)));
                }
            }
            Event::ThresholdsSet { config } => {
                self.require_collection(&config.collection_id)?;
                config.validate()?;
                let current = self.threshold_version(&config.collection_id);
                if config.version != current + 1 {
                    return Err(Error::Conflict(format!(
                        "thresholds for `{}` are at version {current}, expected {} but got {}",
                        config.collection_id,
                        current + 1,
                        config.version
                    )));
                }
            }
            Event::SampleStored { collection_id, .. } => {
                self.require_collection(collection_id)?;
            }
            Event::LedgerImported { .. } => {}
            Event::VerdictRecorded { verdict } => {
                if !verdict.status.is_verdict() {
                    return Err(Error::config(format!("`{}` is not a verdict", verdict.status)));
                }
                let entry = self
                    .ledger
                    .get(&verdict.domain)
                    .ok_or_else(|| Error::NotFound(format!("domain `{}`", verdict.domain)))?;
                if entry.status != DomainStatus::Unverified {
                    return Err(Error::Conflict(format!("domain `{}` is already {}", verdict.domain, entry.status)));
                }
            }
        }
        Ok(())
    }

    /// Checks and applies one logged event.
    pub fn apply(&mut self, entry: &LogEntry) -> Result<()> {
        if entry.seq != self.last_seq + 1 {
            return Err(Error::Conflict(format!("event {} follows {}", entry.seq, self.last_seq)));
        }
        self.check(&entry.event)?;
        match &entry.event {
            Event::CollectionRegistered { record } | Event::CollectionUpdated { record } => {
                self.collections.entry(record.collection_id.clone()).or_default().push(record.clone());
            }
            Event::RiskWeightsSet { weights } => self.risk_weights = *weights,
            Event::RiskAssigned { record } => {
                self.risks.insert(record.collection_id.clone(), record.clone());
            }
            Event::ThresholdsSet { config } => {
                self.thresholds.insert(config.collection_id.clone(), config.clone());
            }
            Event::SampleStored { collection_id, documents, sha256 } => {
                self.samples.insert(collection_id.clone(), SampleInfo { documents: *documents, sha256: sha256.clone() });
            }
            Event::LedgerImported { ledger, min_words } => {
                let mut ledger = ledger.clone();
                build_verification_queue(&mut ledger, *min_words);
                self.ledger = ledger;
                self.min_words = *min_words;
            }
            Event::VerdictRecorded { verdict } => {
                apply_verdicts(&mut self.ledger, std::slice::from_ref(verdict));
            }
        }
        self.last_seq = entry.seq;
        Ok(())
    }
}

/// A registry directory opened for writing. Only one writer should hold it.
#[derive(Debug)]
pub struct Registry {
    root: PathBuf,
    state: RegistryState,
    log: BufWriter<File>,
}

impl Registry {
    /// Opens (or creates) the registry at `root` and rebuilds its state from the log.
    pub fn open(root: impl AsRef<Path>) -> Result<Self> {
        let root = root.as_ref().to_path_buf();
        fs::create_dir_all(root.join("configs"))?;
        fs::create_dir_all(root.join("samples"))?;
        let state = Registry::replay(&root)?;
        let log = BufWriter::new(OpenOptions::new().create(true).append(true).open(root.join(EVENTS))?);
        let reg = Registry { root, state, log };
        reg.write_snapshot()?;
        Ok(reg)
    }

    /// State rebuilt from `events.jsonl` alone.
    pub fn replay(root: impl AsRef<Path>) -> Result<RegistryState> {
        let mut state = RegistryState::default();
        for entry in Registry::read_log(root)? {
            state.apply(&entry)?;
        }
        Ok(state)
    }

    pub fn read_log(root: impl AsRef<Path>) -> Result<Vec<LogEntry>> {
        let path = root.as_ref().join(EVENTS);
        if !path.exists() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: LogEntry = serde_json::from_str(&line)
                .map_err(|e| Error::InvalidDocument { line: i + 1, reason: format!("event log: {e}") })?;
            out.push(entry);
        }
        Ok(out)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn state(&self) -> &RegistryState {
        &self.state
    }

    fn commit(&mut self, event: Event) -> Result<LogEntry> {
        self.state.check(&event)?;
        let entry = LogEntry { seq: self.state.last_seq + 1, time: Utc::now(), event };
        let line = serde_json::to_string(&entry)?;
        writeln!(self.log, "{line}")?;
        self.log.flush()?;
        self.log.get_ref().sync_data()?;
        self.state.apply(&entry)?;
        self.write_snapshot()?;
        log::info!("registry event {} {}", entry.seq, entry.event.kind());
        Ok(entry)
    }

    fn write_atomic(&self, path: &Path, contents: &[u8]) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, contents)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    fn write_snapshot(&self) -> Result<()> {
        let json = serde_json::to_vec_pretty(&self.state)?;
        self.write_atomic(&self.root.join(SNAPSHOT), &json)
    }

    pub fn register_collection(&mut self, mut record: CollectionRecord) -> Result<CollectionRecord> {
        record.version = 1;
        self.commit(Event::CollectionRegistered { record: record.clone() })?;
        Ok(record)
    }

    /// Appends a new version of an existing record.
    pub fn update_collection(&mut self, mut record: CollectionRecord) -> Result<CollectionRecord> {
        let current = self.state.require_collection(&record.collection_id)?;
        record.version = current.version + 1;
        self.commit(Event::CollectionUpdated { record: record.clone() })?;
        Ok(record)
    }

    pub fn collection(&self, id: &str) -> Result<&CollectionRecord> {
        self.state.require_collection(id)
    }

    pub fn collections(&self) -> Vec<&CollectionRecord> {
        self.state.collections.values().filter_map(|h| h.last()).collect()
    }

    pub fn set_risk_weights(&mut self, weights: RiskWeights) -> Result<()> {
        self.commit(Event::RiskWeightsSet { weights })?;
        Ok(())
    }

    pub fn assign_risk(&mut self, collection_id: &str, risk: RiskLevel, rationale: &str) -> Result<RiskRecord> {
        let record = RiskRecord {
            collection_id: collection_id.to_string(),
            risk,
            rationale: rationale.to_string(),
            sampling_weight: self.state.risk_weights.weight(risk),
            rejected: false,
        };
        self.commit(Event::RiskAssigned { record: record.clone() })?;
        Ok(record)
    }

    /// Marks a collection as removed. Its risk level is kept, or set to high if none was assigned.
    pub fn reject_collection(&mut self, collection_id: &str, rationale: &str) -> Result<RiskRecord> {
        let risk = self.state.risks.get(collection_id).map_or(RiskLevel::High, |r| r.risk);
        let record = RiskRecord {
            collection_id: collection_id.to_string(),
            risk,
            rationale: rationale.to_string(),
            sampling_weight: self.state.risk_weights.weight(risk),
            rejected: true,
        };
        self.commit(Event::RiskAssigned { record: record.clone() })?;
        Ok(record)
    }

    /// The stored config, or version 0 of the reference defaults if none was saved yet.
    pub fn thresholds(&self, collection_id: &str) -> Result<ThresholdConfig> {
        self.state.require_collection(collection_id)?;
        Ok(self.state.thresholds.get(collection_id).cloned().unwrap_or_else(|| {
            let mut cfg = ThresholdConfig::reference(collection_id);
            cfg.version = 0;
            cfg
        }))
    }

    /// Stores a config whose version is exactly one above the current one,
    /// and writes it to `configs/<id>.json`.
    pub fn put_thresholds(&mut self, config: ThresholdConfig) -> Result<ThresholdConfig> {
        self.commit(Event::ThresholdsSet { config: config.clone() })?;
        let path = ThresholdConfig::path_in(&self.root.join("configs"), &config.collection_id);
        self.write_atomic(&path, config.to_pretty_json().as_bytes())?;
        Ok(config)
    }

    fn sample_path(&self, collection_id: &str) -> PathBuf {
        self.root.join("samples").join(format!("{collection_id}.jsonl"))
    }

    /// Saves the scored sample that bucket reports are computed from.
    pub fn store_sample(&mut self, collection_id: &str, docs: &[Document]) -> Result<SampleInfo> {
        self.state.require_collection(collection_id)?;
        let mut bytes = Vec::new();
        write_documents(&mut bytes, docs)?;
        let sha256 = hex_lower(&Sha256::digest(&bytes));
        self.write_atomic(&self.sample_path(collection_id), &bytes)?;
        self.commit(Event::SampleStored { collection_id: collection_id.to_string(), documents: docs.len(), sha256: sha256.clone() })?;
        Ok(SampleInfo { documents: docs.len(), sha256 })
    }

    pub fn sample(&self, collection_id: &str) -> Result<Vec<Document>> {
        self.state.require_collection(collection_id)?;
        if !self.state.samples.contains_key(collection_id) {
            return Err(Error::NotFound(format!("sample for collection `{collection_id}`")));
        }
        read_documents(BufReader::new(File::open(self.sample_path(collection_id))?)).collect()
    }

    /// Buckets the stored sample on `dimension`; without `edges`, ten equal-width buckets.
    pub fn buckets(&self, collection_id: &str, dimension: &str, edges: Option<&[f64]>) -> Result<BucketReport> {
        let sample = self.sample(collection_id)?;
        let edges = match edges {
            Some(e) => e.to_vec(),
            None => default_edges(&sample, dimension, DEFAULT_BUCKETS)?,
        };
        bucketize(&sample, dimension, &edges)
    }

    /// Replaces the domain ledger. Domains at or below `min_words` are marked `below_threshold`.
    pub fn import_ledger(&mut self, ledger: DomainLedger, min_words: u64) -> Result<()> {
        self.commit(Event::LedgerImported { ledger, min_words })?;
        Ok(())
    }

    pub fn queue(&self) -> VerificationQueue {
        self.state.queue()
    }

    pub fn record_verdict(&mut self, domain: &str, status: DomainStatus, note: &str, reviewer: &str) -> Result<DomainLedgerEntry> {
        let verdict = Verdict {
            domain: domain.to_string(),
            status,
            verdict_note: note.to_string(),
            verdict_time: Some(Utc::now()),
            reviewer: reviewer.to_string(),
        };
        self.commit(Event::VerdictRecorded { verdict })?;
        Ok(self.state.ledger.get(domain).expect("checked").clone())
    }

    /// Allowlist as JSONL, the format `policy apply --allowlist` reads.
    pub fn export_allowlist(&self) -> String {
        self.state
            .allowlist()
            .iter()
            .map(|v| serde_json::to_string(v).expect("verdict serializes") + "\n")
            .collect()
    }

    /// Latest version of every collection record as a JSON array.
    pub fn export_collections(&self) -> String {
        serde_json::to_string_pretty(&self.collections()).expect("records serialize")
    }
}
