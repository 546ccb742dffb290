mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use cc_curate::policy::{prepare, run_policy, DomainStatus, DEFAULT_MIN_WORDS};

#[test]
fn composed_policy_equals_brute_force() {
    for seed in 0..5 {
        let docs = common::policy_corpus(seed, 1000, 30);
        let start = Instant::now();
        let (_, _, queue) = prepare(&docs, DEFAULT_MIN_WORDS);
        let queued: Vec<String> = queue.items.iter().map(|i| i.domain.clone()).collect();
        let verdicts = common::scripted_allowlist(&queued);
        let outcome = run_policy(&docs, &verdicts, DEFAULT_MIN_WORDS);
        assert!(start.elapsed().as_secs_f64() < 10.0);

        let (want_queue, want_kept) = common::naive_policy(&docs, &verdicts, DEFAULT_MIN_WORDS);
        let got_kept: BTreeSet<String> = outcome.kept.iter().map(|d| d.doc_id.clone()).collect();
        assert_eq!(queued.iter().cloned().collect::<BTreeSet<_>>(), want_queue, "seed {seed}");
        assert_eq!(got_kept, want_kept, "seed {seed}");
    }
}

#[test]
fn corpus_exercises_every_branch() {
    let docs = common::policy_corpus(0, 1000, 30);
    let (survivors, ledger, queue) = prepare(&docs, DEFAULT_MIN_WORDS);
    assert!(!survivors.is_empty() && survivors.len() < docs.len());
    assert!(!queue.items.is_empty());
    assert!(ledger.entries().any(|e| e.status == DomainStatus::BelowThreshold));
    let domains: BTreeSet<_> = docs.iter().map(|d| d.domain.clone()).collect();
    assert!(ledger.len() < domains.len(), "some domains must fail step 1");
    assert!(docs.iter().any(|d| d.license.as_ref().is_some_and(|l| l.conflict)));
}

#[test]
fn verdicts_for_unqueued_domains_are_ignored() {
    let docs = common::policy_corpus(3, 1000, 30);
    let (_, ledger, _) = prepare(&docs, DEFAULT_MIN_WORDS);
    let below: Vec<String> = ledger
        .entries()
        .filter(|e| e.status == DomainStatus::BelowThreshold)
        .map(|e| e.domain.clone())
        .collect();
    let verdicts = common::scripted_allowlist(&below);
    let outcome = run_policy(&docs, &verdicts, DEFAULT_MIN_WORDS);
    assert!(outcome.kept.iter().all(|d| !below.contains(&d.domain)));
}
