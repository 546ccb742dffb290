use serde::{Deserialize, Serialize};

use super::quality::is_dimension;
use crate::{Document, Error, Result};

/// Excerpts kept per bucket.
pub const EXCERPTS_PER_BUCKET: usize = 25;

/// Number of equal-width buckets when no edges are given.
pub const DEFAULT_BUCKETS: usize = 10;

const EXCERPT_CHARS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excerpt {
    pub doc_id: String,
    pub score: f64,
    pub distance_to_edge: f64,
    pub text: String,
}

/// Half-open interval `[lower, upper)`; `None` marks the open underflow or
/// overflow side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub count: usize,
    pub samples: Vec<Excerpt>,
}

impl Bucket {
    pub fn contains(&self, score: f64) -> bool {
        self.lower.is_none_or(|l| score >= l) && self.upper.is_none_or(|u| score < u)
    }

    fn distance(&self, score: f64) -> f64 {
        [self.lower, self.upper]
            .into_iter()
            .flatten()
            .map(|e| (score - e).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketReport {
    pub collection_id: String,
    pub dimension: String,
    pub edges: Vec<f64>,
    /// `edges.len() + 1` buckets: underflow, the interior intervals, overflow.
    pub buckets: Vec<Bucket>,
}

impl BucketReport {
    pub fn total(&self) -> usize {
        self.buckets.iter().map(|b| b.count).sum()
    }
}

/// Reads a bucketable score: a quality dimension name or `language.<code>`.
pub fn dimension_value(doc: &Document, dimension: &str) -> Result<f64> {
    if let Some(code) = dimension.strip_prefix("language.") {
        let scores = doc
            .language_scores
            .as_ref()
            .ok_or_else(|| Error::config(format!("document {} has no language scores", doc.doc_id)))?;
        return Ok(scores.get(code));
    }
    if !is_dimension(dimension) {
        return Err(Error::UnknownDimension(dimension.to_string()));
    }
    let quality = doc
        .quality_scores
        .as_ref()
        .ok_or_else(|| Error::config(format!("document {} has no quality scores", doc.doc_id)))?;
    Ok(quality.get(dimension).expect("checked above"))
}

pub fn validate_edges(edges: &[f64]) -> Result<()> {
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NonMonotoneEdges);
    }
    Ok(())
}

/// Places every document of `sample` in exactly one bucket and keeps up to
/// [`EXCERPTS_PER_BUCKET`] excerpts per bucket, nearest to a bucket edge
/// first (ties by `doc_id`).
pub fn bucketize(sample: &[Document], dimension: &str, edges: &[f64]) -> Result<BucketReport> {
    validate_edges(edges)?;
    let mut buckets: Vec<Bucket> = (0..=edges.len())
        .map(|i| Bucket {
            lower: i.checked_sub(1).map(|j| edges[j]),
            upper: edges.get(i).copied(),
            count: 0,
            samples: Vec::new(),
        })
        .collect();
    let mut members: Vec<Vec<(f64, f64, &Document)>> = vec![Vec::new(); buckets.len()];
    for doc in sample {
        let score = dimension_value(doc, dimension)?;
        // number of edges <= score
        let idx = edges.partition_point(|e| *e <= score);
        let bucket = &mut buckets[idx];
        bucket.count += 1;
        members[idx].push((bucket.distance(score), score, doc));
    }
    for (bucket, mut docs) in buckets.iter_mut().zip(members) {
        docs.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.2.doc_id.cmp(&b.2.doc_id)));
        bucket.samples = docs
            .into_iter()
            .take(EXCERPTS_PER_BUCKET)
            .map(|(distance, score, doc)| Excerpt {
                doc_id: doc.doc_id.clone(),
                score,
                distance_to_edge: distance,
                text: doc.text.chars().take(EXCERPT_CHARS).collect(),
            })
            .collect();
    }
    Ok(BucketReport {
        collection_id: sample.first().map(|d| d.collection_id.clone()).unwrap_or_default(),
        dimension: dimension.to_string(),
        edges: edges.to_vec(),
        buckets,
    })
}

/// Default edges: `n` equal-width cut points spanning the observed range.
pub fn default_edges(sample: &[Document], dimension: &str, n: usize) -> Result<Vec<f64>> {
    let values = sample.iter().map(|d| dimension_value(d, dimension)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if values.is_empty() || lo >= hi || n == 0 {
        return Ok(if values.is_empty() { Vec::new() } else { vec![lo] });
    }
    let step = (hi - lo) / n as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curate::QualityScores;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn doc_with(score: f64, i: usize) -> Document {
        let mut doc = Document::new("col", format!("https://a.nl/{i}"), format!("document {i}"));
        doc.quality_scores = Some(QualityScores { frac_alpha_words: score, ..Default::default() });
        doc
    }

    #[test]
    fn single_document_underflow() {
        let r = bucketize(&[doc_with(0.4, 0)], "frac_alpha_words", &[0.5]).unwrap();
        assert_eq!(r.buckets.len(), 2);
        assert_eq!(r.buckets[0].count, 1);
        assert_eq!(r.buckets[1].count, 0);
        assert_eq!(r.collection_id, "col");
    }

    #[test]
    fn edges_are_half_open() {
        let docs: Vec<_> = [0.1, 0.2, 0.3].iter().enumerate().map(|(i, s)| doc_with(*s, i)).collect();
        let r = bucketize(&docs, "frac_alpha_words", &[0.2, 0.3]).unwrap();
        assert_eq!(r.buckets.iter().map(|b| b.count).collect::<Vec<_>>(), [1, 1, 1]);
    }

    #[test]
    fn non_monotone_edges_rejected() {
        assert!(matches!(bucketize(&[], "min_chars", &[0.5, 0.5]), Err(Error::NonMonotoneEdges)));
        assert!(matches!(bucketize(&[], "min_chars", &[0.6, 0.5]), Err(Error::NonMonotoneEdges)));
        assert!(matches!(bucketize(&[doc_with(0.1, 0)], "nope", &[0.5]), Err(Error::UnknownDimension(_))));
    }

    #[test]
    fn partition_and_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let docs: Vec<_> = (0..500).map(|i| doc_with(rng.gen_range(-0.2..1.2), i)).collect();
        let r = bucketize(&docs, "frac_alpha_words", &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_eq!(r.total(), docs.len());
        for bucket in &r.buckets {
            assert!(bucket.samples.len() <= EXCERPTS_PER_BUCKET);
            for s in &bucket.samples {
                assert!(bucket.contains(s.score));
            }
        }
        for doc in &docs {
            let v = doc.quality_scores.unwrap().frac_alpha_words;
            assert_eq!(r.buckets.iter().filter(|b| b.contains(v)).count(), 1);
        }
    }

    #[test]
    fn border_documents_are_preferred() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let docs: Vec<_> = (0..100).map(|i| doc_with(rng.gen_range(0.4..0.6), i)).collect();
        let r = bucketize(&docs, "frac_alpha_words", &[0.4, 0.6]).unwrap();
        let bucket = &r.buckets[1];
        assert_eq!(bucket.count, 100);
        let chosen: f64 = bucket.samples.iter().map(|s| s.distance_to_edge).sum::<f64>() / bucket.samples.len() as f64;
        // Oracle: mean distance under uniform in-bucket sampling, averaged over draws.
        let distance = |v: f64| (v - 0.4).abs().min((0.6 - v).abs());
        let mut uniform_means = Vec::new();
        for seed in 0..50 {
            let pick = crate::curate::sample_representative(docs.iter(), EXCERPTS_PER_BUCKET, seed);
            let mean = pick.iter().map(|d| distance(d.quality_scores.unwrap().frac_alpha_words)).sum::<f64>() / pick.len() as f64;
            uniform_means.push(mean);
        }
        let uniform = uniform_means.iter().sum::<f64>() / uniform_means.len() as f64;
        assert!(chosen <= uniform, "border mean {chosen} vs uniform {uniform}");
    }

    #[test]
    fn language_dimension() {
        let mut doc = doc_with(0.5, 0);
        doc.language_scores = Some(crate::langid::LanguageScores::from_pairs([("nld".into(), 0.7), ("eng".into(), 0.3)]));
        let r = bucketize(&[doc], "language.nld", &[0.5]).unwrap();
        assert_eq!(r.buckets[1].count, 1);
    }

    #[test]
    fn default_edges_span_range() {
        let docs: Vec<_> = [0.0, 1.0].iter().enumerate().map(|(i, s)| doc_with(*s, i)).collect();
        assert_eq!(default_edges(&docs, "frac_alpha_words", 4).unwrap(), [0.0, 0.25, 0.5, 0.75]);
        assert_eq!(default_edges(&docs[..1], "frac_alpha_words", 4).unwrap(), [0.0]);
    }
}
