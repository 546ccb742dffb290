//! Domain-level license policy for the web collection.
//!
//! 1. Group documents per registrable domain and drop domains whose
//!    annotated documents are not all CC0 / PDM / CC-BY, or that contain a
//!    conflicting annotation.
//! 2. Keep only documents whose best license sits in the head or footer.
//! 3. Queue the remaining domains above a word threshold for human
//!    verification and keep only domains a reviewer approved.

mod ledger;
mod predicates;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use ledger::{build_ledger, DomainLedger, DomainLedgerEntry, DomainStatus, Evidence, EVIDENCE_DOCS};
pub use predicates::{permissive_code_license, permissive_text_license, PERMISSIVE_CODE_LICENSES};

use crate::license::Location;
use crate::{Document, Error, Result};

/// Default word threshold for the verification queue.
pub const DEFAULT_MIN_WORDS: u64 = 250_000;

/// Step 1: domains whose every annotated document carries a permissive
/// family and none of which has conflicting candidates.
pub fn filter_domain_license(ledger: &DomainLedger) -> BTreeSet<String> {
    ledger
        .entries()
        .filter(|e| e.is_all_permissive())
        .map(|e| e.domain.clone())
        .collect()
}

/// Step 2: documents whose best license was found in the head or footer.
pub fn filter_license_position<'a>(docs: impl IntoIterator<Item = &'a Document>) -> Vec<&'a Document> {
    docs.into_iter()
        .filter(|d| {
            matches!(
                d.license.as_ref().and_then(|l| l.best_location),
                Some(Location::Head | Location::Footer)
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueItem {
    pub domain: String,
    pub word_count: u64,
    pub evidence: Vec<Evidence>,
}

/// Unverified domains above the word threshold, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerificationQueue {
    pub items: Vec<QueueItem>,
}

/// Step 3a: marks unverified domains at or below `min_words` as
/// `below_threshold` and returns the rest, sorted by word count descending
/// with ties broken by domain name.
pub fn build_verification_queue(ledger: &mut DomainLedger, min_words: u64) -> VerificationQueue {
    let mut items = Vec::new();
    for entry in ledger.entries_mut() {
        if entry.status != DomainStatus::Unverified {
            continue;
        }
        if entry.word_count > min_words {
            items.push(QueueItem {
                domain: entry.domain.clone(),
                word_count: entry.word_count,
                evidence: entry.evidence.clone(),
            });
        } else {
            entry.status = DomainStatus::BelowThreshold;
        }
    }
    items.sort_by(|a, b| b.word_count.cmp(&a.word_count).then_with(|| a.domain.cmp(&b.domain)));
    VerificationQueue { items }
}

/// One line of an allowlist file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub domain: String,
    pub status: DomainStatus,
    #[serde(default)]
    pub verdict_note: String,
    #[serde(default)]
    pub verdict_time: Option<chrono::DateTime<chrono::Utc>>,
    #[serde(default)]
    pub reviewer: String,
}

impl Verdict {
    pub fn read_jsonl(source: &str) -> Result<Vec<Verdict>> {
        source
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                let v: Verdict = serde_json::from_str(l)
                    .map_err(|e| Error::config(format!("allowlist line {}: {e}", i + 1)))?;
                if !v.status.is_verdict() {
                    return Err(Error::config(format!("allowlist line {}: `{}` is not a verdict", i + 1, v.status)));
                }
                Ok(v)
            })
            .collect()
    }
}

/// Records human verdicts on unverified domains. Verdicts for domains that
/// are unknown, below threshold or already decided are ignored; their
/// domains are returned.
pub fn apply_verdicts(ledger: &mut DomainLedger, verdicts: &[Verdict]) -> Vec<String> {
    let mut ignored = Vec::new();
    for v in verdicts {
        match ledger.get_mut(&v.domain) {
            Some(entry) if entry.status == DomainStatus::Unverified && v.status.is_verdict() => {
                entry.status = v.status;
                entry.verdict_note = v.verdict_note.clone();
                entry.verdict_time = v.verdict_time;
            }
            _ => ignored.push(v.domain.clone()),
        }
    }
    ignored
}

/// Step 3b: documents on domains a reviewer marked `verified_permissive`.
pub fn apply_allowlist<'a>(docs: impl IntoIterator<Item = &'a Document>, ledger: &DomainLedger) -> Vec<&'a Document> {
    docs.into_iter()
        .filter(|d| ledger.get(&d.domain).is_some_and(|e| e.status == DomainStatus::VerifiedPermissive))
        .collect()
}

#[derive(Debug, Clone)]
pub struct PolicyOutcome<'a> {
    pub kept: Vec<&'a Document>,
    /// Ledger over step-1/step-2 survivors, with statuses after verdicts.
    pub ledger: DomainLedger,
    pub queue: VerificationQueue,
}

/// Steps 1 and 2 plus queue construction, without verdicts.
pub fn prepare(docs: &[Document], min_words: u64) -> (Vec<&Document>, DomainLedger, VerificationQueue) {
    let full = build_ledger(docs);
    let domains = filter_domain_license(&full);
    let survivors = filter_license_position(docs.iter().filter(|d| domains.contains(&d.domain)));
    let mut ledger = build_ledger(survivors.iter().copied());
    let queue = build_verification_queue(&mut ledger, min_words);
    (survivors, ledger, queue)
}

/// Full policy: steps 1-3 with verdicts taken from an allowlist.
pub fn run_policy<'a>(docs: &'a [Document], verdicts: &[Verdict], min_words: u64) -> PolicyOutcome<'a> {
    let (survivors, mut ledger, queue) = prepare(docs, min_words);
    apply_verdicts(&mut ledger, verdicts);
    let kept = apply_allowlist(survivors, &ledger);
    PolicyOutcome { kept, ledger, queue }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::license::{CcLicense, Family, LicenseAnnotation};

    pub(crate) fn licensed(domain: &str, i: usize, family: Option<Family>, location: Location, words: usize, conflict: bool) -> Document {
        let text = vec!["woord"; words].join(" ");
        let mut doc = Document::new("c5", format!("https://www.{domain}/{i}"), text);
        doc.license = Some(LicenseAnnotation {
            candidates: Vec::new(),
            best: family.map(|f| CcLicense::new(f, Some("4.0"), None)),
            best_location: family.map(|_| location),
            conflict,
        });
        doc
    }

    #[test]
    fn domain_license_filter() {
        let docs = vec![
            licensed("a.nl", 0, Some(Family::By), Location::Head, 1, false),
            licensed("a.nl", 1, Some(Family::Zero), Location::Footer, 1, false),
            licensed("b.nl", 0, Some(Family::By), Location::Head, 1, false),
            licensed("b.nl", 1, Some(Family::BySa), Location::Head, 1, false),
            licensed("c.nl", 0, Some(Family::By), Location::Head, 1, true),
            licensed("d.nl", 0, None, Location::Head, 1, false),
        ];
        let retained = filter_domain_license(&build_ledger(&docs));
        assert_eq!(retained, BTreeSet::from(["a.nl".to_string()]));
    }

    #[test]
    fn position_filter() {
        let head = licensed("a.nl", 0, Some(Family::By), Location::Head, 1, false);
        let body = licensed("a.nl", 1, Some(Family::By), Location::Body, 1, false);
        let none = Document::new("c5", "https://a.nl/x", "x");
        let kept = filter_license_position([&head, &body, &none]);
        assert_eq!(kept, vec![&head]);
    }

    #[test]
    fn queue_threshold_and_order() {
        let docs = vec![
            licensed("three.nl", 0, Some(Family::By), Location::Head, 300_000, false),
            licensed("two.nl", 0, Some(Family::By), Location::Head, 200_000, false),
            licensed("four.nl", 0, Some(Family::By), Location::Head, 400_000, false),
        ];
        let mut ledger = build_ledger(&docs);
        let queue = build_verification_queue(&mut ledger, DEFAULT_MIN_WORDS);
        let order: Vec<_> = queue.items.iter().map(|i| i.domain.as_str()).collect();
        assert_eq!(order, ["four.nl", "three.nl"]);
        assert_eq!(ledger.get("two.nl").unwrap().status, DomainStatus::BelowThreshold);
        assert!(build_verification_queue(&mut DomainLedger::default(), DEFAULT_MIN_WORDS).items.is_empty());
    }

    #[test]
    fn queue_ties_break_by_domain() {
        let docs = vec![
            licensed("zeta.nl", 0, Some(Family::By), Location::Head, 10, false),
            licensed("alpha.nl", 0, Some(Family::By), Location::Head, 10, false),
            licensed("mid.nl", 0, Some(Family::By), Location::Head, 20, false),
        ];
        let queue = build_verification_queue(&mut build_ledger(&docs), 0);
        let got: Vec<_> = queue.items.iter().map(|i| (i.word_count, i.domain.clone())).collect();
        let mut oracle = got.clone();
        oracle.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        assert_eq!(got, oracle);
        assert_eq!(got[1].1, "alpha.nl");
    }

    #[test]
    fn allowlist_application() {
        let docs = vec![
            licensed("ok.nl", 0, Some(Family::By), Location::Head, 10, false),
            licensed("ok.nl", 1, Some(Family::By), Location::Footer, 10, false),
            licensed("no.nl", 0, Some(Family::By), Location::Head, 10, false),
        ];
        let verdicts = vec![
            Verdict { domain: "ok.nl".into(), status: DomainStatus::VerifiedPermissive, verdict_note: String::new(), verdict_time: None, reviewer: "r".into() },
            Verdict { domain: "no.nl".into(), status: DomainStatus::Rejected, verdict_note: "image-only license".into(), verdict_time: None, reviewer: "r".into() },
        ];
        let out = run_policy(&docs, &verdicts, 0);
        assert_eq!(out.kept.len(), 2);
        assert!(out.kept.iter().all(|d| d.domain == "ok.nl"));
        assert_eq!(out.ledger.get("no.nl").unwrap().status, DomainStatus::Rejected);
    }

    #[test]
    fn verdicts_cannot_skip_the_threshold() {
        let docs = vec![licensed("small.nl", 0, Some(Family::By), Location::Head, 10, false)];
        let verdicts = vec![Verdict { domain: "small.nl".into(), status: DomainStatus::VerifiedPermissive, verdict_note: String::new(), verdict_time: None, reviewer: String::new() }];
        assert!(run_policy(&docs, &verdicts, DEFAULT_MIN_WORDS).kept.is_empty());
    }

    #[test]
    fn allowlist_parsing() {
        let src = r#"{"domain":"a.nl","status":"verified_permissive","verdict_note":"ok","verdict_time":"2026-01-02T03:04:05Z","reviewer":"anna"}
{"domain":"b.nl","status":"rejected"}
"#;
        let v = Verdict::read_jsonl(src).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].status, DomainStatus::Rejected);
        assert!(Verdict::read_jsonl(r#"{"domain":"a.nl","status":"below_threshold"}"#).is_err());
        assert!(Verdict::read_jsonl("{").is_err());
    }
}
