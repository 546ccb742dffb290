use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::license::{Location, SourceKind};
use crate::Document;

/// Documents per domain whose top-ranked candidate is kept as evidence.
pub const EVIDENCE_DOCS: usize = 5;

const NO_LICENSE: &str = "none";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DomainStatus {
    #[default]
    Unverified,
    VerifiedPermissive,
    Rejected,
    BelowThreshold,
}

impl DomainStatus {
    /// Statuses a reviewer may assign.
    pub fn is_verdict(self) -> bool {
        matches!(self, DomainStatus::VerifiedPermissive | DomainStatus::Rejected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DomainStatus::Unverified => "unverified",
            DomainStatus::VerifiedPermissive => "verified_permissive",
            DomainStatus::Rejected => "rejected",
            DomainStatus::BelowThreshold => "below_threshold",
        }
    }
}

impl fmt::Display for DomainStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Top-ranked license candidate of one document, shown to reviewers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Evidence {
    pub doc_id: String,
    pub url: String,
    pub source_kind: SourceKind,
    pub location: Location,
    pub target_url: String,
    pub snippet: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainLedgerEntry {
    pub domain: String,
    pub doc_count: u64,
    /// Whitespace words, standing in for tokens.
    pub word_count: u64,
    /// Documents carrying a license annotation; both histograms sum to this.
    pub annotated_count: u64,
    pub conflict_count: u64,
    /// Best family per annotated document (`"none"` when nothing parsed).
    pub family_histogram: BTreeMap<String, u64>,
    /// Best location per annotated document (`"none"` when nothing parsed).
    pub location_histogram: BTreeMap<String, u64>,
    pub status: DomainStatus,
    #[serde(default)]
    pub verdict_note: String,
    #[serde(default)]
    pub verdict_time: Option<DateTime<Utc>>,
    /// Up to [`EVIDENCE_DOCS`] entries, smallest `doc_id` first.
    #[serde(default)]
    pub evidence: Vec<Evidence>,
}

impl DomainLedgerEntry {
    fn empty(domain: &str) -> Self {
        DomainLedgerEntry {
            domain: domain.to_string(),
            doc_count: 0,
            word_count: 0,
            annotated_count: 0,
            conflict_count: 0,
            family_histogram: BTreeMap::new(),
            location_histogram: BTreeMap::new(),
            status: DomainStatus::Unverified,
            verdict_note: String::new(),
            verdict_time: None,
            evidence: Vec::new(),
        }
    }

    /// At least one parsed license, all of them permissive, and no conflicts.
    /// Documents without a parsed license are neutral.
    pub fn is_all_permissive(&self) -> bool {
        let mut families = self.family_histogram.keys().filter(|k| *k != NO_LICENSE).peekable();
        families.peek().is_some()
            && families.all(|f| matches!(f.as_str(), "zero" | "mark" | "by"))
            && self.conflict_count == 0
    }

    fn add(&mut self, doc: &Document) {
        self.doc_count += 1;
        self.word_count += doc.word_count as u64;
        let Some(license) = &doc.license else { return };
        self.annotated_count += 1;
        if license.conflict {
            self.conflict_count += 1;
        }
        let family = license.best_family().map_or(NO_LICENSE, |f| f.as_str());
        *self.family_histogram.entry(family.to_string()).or_default() += 1;
        let location = license.best_location.map_or(NO_LICENSE, |l| l.as_str());
        *self.location_histogram.entry(location.to_string()).or_default() += 1;
        if let Some(top) = license.candidates.first() {
            self.push_evidence(Evidence {
                doc_id: doc.doc_id.clone(),
                url: doc.url.clone(),
                source_kind: top.source_kind,
                location: top.location,
                target_url: top.target_url.clone(),
                snippet: top.context_snippet.clone(),
            });
        }
    }

    fn push_evidence(&mut self, ev: Evidence) {
        if self.evidence.iter().any(|e| e.doc_id == ev.doc_id) {
            return;
        }
        let pos = self.evidence.partition_point(|e| e < &ev);
        if pos < EVIDENCE_DOCS {
            self.evidence.insert(pos, ev);
            self.evidence.truncate(EVIDENCE_DOCS);
        }
    }

    fn merge(&mut self, other: DomainLedgerEntry) {
        self.doc_count += other.doc_count;
        self.word_count += other.word_count;
        self.annotated_count += other.annotated_count;
        self.conflict_count += other.conflict_count;
        for (k, v) in other.family_histogram {
            *self.family_histogram.entry(k).or_default() += v;
        }
        for (k, v) in other.location_histogram {
            *self.location_histogram.entry(k).or_default() += v;
        }
        if self.status == DomainStatus::Unverified {
            self.status = other.status;
            self.verdict_note = other.verdict_note;
            self.verdict_time = other.verdict_time;
        }
        for ev in other.evidence {
            self.push_evidence(ev);
        }
    }
}

/// Per-domain aggregation, keyed by registrable domain.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainLedger {
    entries: BTreeMap<String, DomainLedgerEntry>,
}

impl DomainLedger {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, domain: &str) -> Option<&DomainLedgerEntry> {
        self.entries.get(domain)
    }

    pub fn get_mut(&mut self, domain: &str) -> Option<&mut DomainLedgerEntry> {
        self.entries.get_mut(domain)
    }

    pub fn entries(&self) -> impl Iterator<Item = &DomainLedgerEntry> {
        self.entries.values()
    }

    pub fn entries_mut(&mut self) -> impl Iterator<Item = &mut DomainLedgerEntry> {
        self.entries.values_mut()
    }

    pub fn insert(&mut self, entry: DomainLedgerEntry) {
        self.entries.insert(entry.domain.clone(), entry);
    }

    pub fn add(&mut self, doc: &Document) {
        self.entries
            .entry(doc.domain.clone())
            .or_insert_with(|| DomainLedgerEntry::empty(&doc.domain))
            .add(doc);
    }

    /// Combines two shard ledgers. Associative and commutative for ledgers
    /// built from documents.
    pub fn merge(mut self, other: DomainLedger) -> DomainLedger {
        for (domain, entry) in other.entries {
            match self.entries.get_mut(&domain) {
                Some(mine) => mine.merge(entry),
                None => {
                    self.entries.insert(domain, entry);
                }
            }
        }
        self
    }
}

pub fn build_ledger<'a>(docs: impl IntoIterator<Item = &'a Document>) -> DomainLedger {
    let mut ledger = DomainLedger::default();
    for doc in docs {
        ledger.add(doc);
    }
    ledger
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::license::Family;
    use crate::policy::tests::licensed;
    use proptest::prelude::*;

    #[test]
    fn empty_input() {
        assert!(build_ledger(&[]).is_empty());
    }

    #[test]
    fn counts_per_domain() {
        let docs: Vec<Document> = (0..3)
            .map(|i| licensed("a.example", i, Some(Family::By), Location::Head, 4, false))
            .chain((0..2).map(|i| licensed("b.example", i, Some(Family::Zero), Location::Footer, 2, false)))
            .collect();
        let ledger = build_ledger(&docs);
        let a = ledger.get("a.example").unwrap();
        assert_eq!((a.doc_count, a.word_count), (3, 12));
        assert_eq!(a.family_histogram["by"], 3);
        assert_eq!(a.location_histogram["head"], 3);
        assert_eq!(ledger.get("b.example").unwrap().doc_count, 2);
    }

    #[test]
    fn histograms_sum_to_annotated_count() {
        let mut docs = vec![
            licensed("a.nl", 0, Some(Family::By), Location::Head, 1, false),
            licensed("a.nl", 1, None, Location::Head, 1, false),
        ];
        docs.push(Document::new("c5", "https://a.nl/plain", "no license"));
        let e = build_ledger(&docs).get("a.nl").unwrap().clone();
        assert_eq!(e.doc_count, 3);
        assert_eq!(e.annotated_count, 2);
        assert_eq!(e.family_histogram.values().sum::<u64>(), 2);
        assert_eq!(e.location_histogram.values().sum::<u64>(), 2);
        assert!(e.is_all_permissive());
    }

    fn arb_docs() -> impl Strategy<Value = Vec<Document>> {
        let fam = prop_oneof![
            Just(None),
            Just(Some(Family::By)),
            Just(Some(Family::Zero)),
            Just(Some(Family::BySa)),
        ];
        let loc = prop_oneof![Just(Location::Head), Just(Location::Footer), Just(Location::Body)];
        proptest::collection::vec((0usize..4, fam, loc, 1usize..20, any::<bool>()), 0..40).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (d, f, l, w, c))| licensed(&format!("d{d}.nl"), i, f, l, w, c))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn merging_shards_equals_single_pass(docs in arb_docs(), cut1 in 0usize..40, cut2 in 0usize..40) {
            let (a, b) = (cut1.min(docs.len()), cut2.min(docs.len()));
            let (lo, hi) = (a.min(b), a.max(b));
            let whole = build_ledger(&docs);
            let s1 = build_ledger(&docs[..lo]);
            let s2 = build_ledger(&docs[lo..hi]);
            let s3 = build_ledger(&docs[hi..]);
            prop_assert_eq!(&s1.clone().merge(s2.clone()).merge(s3.clone()), &whole);
            prop_assert_eq!(&s3.clone().merge(s1.clone().merge(s2.clone())), &whole);
            prop_assert_eq!(&s2.merge(s3).merge(s1), &whole);
        }
    }
}
