//! Within-collection deduplication: exact hashes, then MinHash near-duplicates.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curate::normalize;
use crate::document::{hex_lower, Document};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DedupConfig {
    pub shingle_words: usize,
    pub num_perm: usize,
    pub bands: usize,
    pub threshold: f64,
}

impl Default for DedupConfig {
    fn default() -> Self {
        DedupConfig { shingle_words: 13, num_perm: 128, bands: 16, threshold: 0.9 }
    }
}

impl DedupConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shingle_words == 0 || self.num_perm == 0 || self.bands == 0 {
            return Err(Error::config("dedup sizes must be positive"));
        }
        if self.num_perm % self.bands != 0 {
            return Err(Error::config(format!("{} permutations do not split into {} bands", self.num_perm, self.bands)));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::config(format!("threshold {} outside [0, 1]", self.threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DupKind {
    Exact,
    Near,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedDoc {
    pub dropped: String,
    pub retained: String,
    pub kind: DupKind,
    /// Estimated Jaccard similarity; 1.0 for exact duplicates.
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DedupReport {
    pub scope: String,
    pub input_count: usize,
    pub kept_count: usize,
    pub dropped: Vec<DroppedDoc>,
}

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Lowercased words of the normalized text.
fn words(text: &str) -> Vec<String> {
    normalize(text).split_whitespace().map(str::to_lowercase).collect()
}

/// 64-bit fingerprints of the `k`-word shingles. A text shorter than `k`
/// words is a single shingle.
pub fn shingles(text: &str, k: usize) -> HashSet<u64> {
    let w = words(text);
    if w.is_empty() {
        return HashSet::new();
    }
    if w.len() <= k {
        return HashSet::from([fnv1a64(w.join(" ").as_bytes())]);
    }
    w.windows(k).map(|win| fnv1a64(win.join(" ").as_bytes())).collect()
}

/// Exact Jaccard similarity of two shingle sets; two empty sets count as identical.
pub fn jaccard(a: &HashSet<u64>, b: &HashSet<u64>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    inter as f64 / (a.len() + b.len() - inter) as f64
}

#[derive(Debug, Clone)]
pub struct MinHasher {
    seeds: Vec<u64>,
    k: usize,
}

impl MinHasher {
    pub fn new(num_perm: usize, shingle_words: usize) -> Self {
        let seeds = (0..num_perm as u64).map(|i| splitmix64(0x6a09_e667_f3bc_c908 ^ i)).collect();
        MinHasher { seeds, k: shingle_words }
    }

    /// `None` for texts without words.
    pub fn signature(&self, text: &str) -> Option<Vec<u64>> {
        let sh = shingles(text, self.k);
        if sh.is_empty() {
            return None;
        }
        Some(
            self.seeds
                .iter()
                .map(|seed| sh.iter().map(|x| splitmix64(x ^ seed)).min().expect("non-empty"))
                .collect(),
        )
    }
}

pub fn estimate_jaccard(a: &[u64], b: &[u64]) -> f64 {
    let same = a.iter().zip(b).filter(|(x, y)| x == y).count();
    same as f64 / a.len() as f64
}

/// SHA-256 of the normalized text, lowercase hex.
pub fn content_hash(text: &str) -> String {
    hex_lower(&Sha256::digest(normalize(text).as_bytes()))
}

/// Sequential dedup fold. Documents are offered in input order; the first of
/// each duplicate group is kept.
#[derive(Debug)]
pub struct Deduplicator {
    scope: String,
    cfg: DedupConfig,
    hasher: MinHasher,
    exact: HashMap<String, String>,
    signatures: Vec<(String, Vec<u64>)>,
    bands: HashMap<(usize, u64), Vec<usize>>,
    report: DedupReport,
    compared: Option<Vec<(String, String)>>,
}

impl Deduplicator {
    pub fn new(scope: impl Into<String>, cfg: DedupConfig) -> Result<Self> {
        cfg.validate()?;
        let hasher = MinHasher::new(cfg.num_perm, cfg.shingle_words);
        let scope = scope.into();
        Ok(Deduplicator {
            report: DedupReport { scope: scope.clone(), ..Default::default() },
            scope,
            cfg,
            hasher,
            exact: HashMap::new(),
            signatures: Vec::new(),
            bands: HashMap::new(),
            compared: None,
        })
    }

    /// Records every (candidate, retained) doc_id pair that gets a similarity check.
    pub fn record_comparisons(mut self) -> Self {
        self.compared = Some(Vec::new());
        self
    }

    pub fn comparisons(&self) -> &[(String, String)] {
        self.compared.as_deref().unwrap_or(&[])
    }

    fn band_keys(&self, sig: &[u64]) -> Vec<(usize, u64)> {
        let rows = self.cfg.num_perm / self.cfg.bands;
        sig.chunks(rows)
            .enumerate()
            .map(|(b, chunk)| {
                let bytes: Vec<u8> = chunk.iter().flat_map(|x| x.to_le_bytes()).collect();
                (b, fnv1a64(&bytes))
            })
            .collect()
    }

    /// Returns true when the document should be kept.
    pub fn offer(&mut self, doc: &Document) -> Result<bool> {
        if doc.collection_id != self.scope {
            return Err(Error::OutOfScope {
                doc_id: doc.doc_id.clone(),
                expected: self.scope.clone(),
                found: doc.collection_id.clone(),
            });
        }
        self.report.input_count += 1;
        let hash = content_hash(&doc.text);
        if let Some(first) = self.exact.get(&hash) {
            self.report.dropped.push(DroppedDoc {
                dropped: doc.doc_id.clone(),
                retained: first.clone(),
                kind: DupKind::Exact,
                similarity: 1.0,
            });
            return Ok(false);
        }
        let sig = self.hasher.signature(&doc.text);
        if let Some(sig) = &sig {
            let keys = self.band_keys(sig);
            let mut candidates: Vec<usize> = keys.iter().filter_map(|k| self.bands.get(k)).flatten().copied().collect();
            candidates.sort_unstable();
            candidates.dedup();
            let mut best: Option<(usize, f64)> = None;
            for c in candidates {
                let (ref retained_id, ref other) = self.signatures[c];
                if let Some(log) = &mut self.compared {
                    log.push((doc.doc_id.clone(), retained_id.clone()));
                }
                let est = estimate_jaccard(sig, other);
                if est >= self.cfg.threshold && best.is_none_or(|(_, b)| est > b) {
                    best = Some((c, est));
                }
            }
            if let Some((c, est)) = best {
                self.report.dropped.push(DroppedDoc {
                    dropped: doc.doc_id.clone(),
                    retained: self.signatures[c].0.clone(),
                    kind: DupKind::Near,
                    similarity: est,
                });
                return Ok(false);
            }
            let idx = self.signatures.len();
            self.signatures.push((doc.doc_id.clone(), sig.clone()));
            for k in keys {
                self.bands.entry(k).or_default().push(idx);
            }
        }
        self.exact.insert(hash, doc.doc_id.clone());
        self.report.kept_count += 1;
        Ok(true)
    }

    pub fn report(&self) -> &DedupReport {
        &self.report
    }

    pub fn into_report(self) -> DedupReport {
        self.report
    }
}

/// Deduplicates one collection with the default configuration.
pub fn deduplicate<I>(docs: I, scope: &str) -> Result<(Vec<Document>, DedupReport)>
where
    I: IntoIterator<Item = Document>,
{
    deduplicate_with(docs, scope, &DedupConfig::default())
}

pub fn deduplicate_with<I>(docs: I, scope: &str, cfg: &DedupConfig) -> Result<(Vec<Document>, DedupReport)>
where
    I: IntoIterator<Item = Document>,
{
    let mut d = Deduplicator::new(scope, cfg.clone())?;
    let mut kept = Vec::new();
    for doc in docs {
        if d.offer(&doc)? {
            kept.push(doc);
        }
    }
    Ok((kept, d.into_report()))
}
