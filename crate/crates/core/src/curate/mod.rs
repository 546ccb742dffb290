//! The evaluation run: normalization, quality scoring, per-collection
//! thresholds, representative sampling and score buckets for review.

mod buckets;
mod normalize;
mod quality;
mod sample;
mod thresholds;

pub use buckets::{bucketize, default_edges, dimension_value, validate_edges, Bucket, BucketReport, Excerpt, DEFAULT_BUCKETS, EXCERPTS_PER_BUCKET};
pub use normalize::normalize;
pub use quality::{is_dimension, score_quality, score_quality_for, stopwords, QualityScores, DIMENSIONS};
pub use sample::sample_representative;
pub use thresholds::{apply_thresholds, Bound, FilterVerdict, ThresholdConfig};

use crate::langid::{score_language, LanguageProfile};
use crate::{Document, Stage};

/// Normalizes the text and fills in language and quality scores.
pub fn score_document(doc: &mut Document, profiles: &[LanguageProfile]) {
    let text = normalize(&doc.text);
    doc.set_text(text);
    doc.advance(Stage::Normalized);
    let language = score_language(&doc.text, profiles);
    doc.quality_scores = Some(score_quality(&doc.text));
    doc.language_scores = Some(language);
    doc.advance(Stage::Scored);
}
