use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::quality::{is_dimension, DIMENSIONS};
use crate::{Document, Error, Result};

/// Inclusive bounds on one quality dimension.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bound {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

impl Bound {
    pub fn at_least(v: f64) -> Self {
        Bound { lower: Some(v), upper: None }
    }

    pub fn at_most(v: f64) -> Self {
        Bound { lower: None, upper: Some(v) }
    }

    pub fn between(lower: f64, upper: f64) -> Self {
        Bound { lower: Some(lower), upper: Some(upper) }
    }

    pub fn admits(&self, value: f64) -> bool {
        self.lower.is_none_or(|l| value >= l) && self.upper.is_none_or(|u| value <= u)
    }
}

/// Per-collection filter settings produced by the tuning loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub collection_id: String,
    #[serde(default)]
    pub version: u64,
    #[serde(default)]
    pub note: String,
    pub target_languages: BTreeSet<String>,
    /// Minimum `top_score` per language; languages not listed have no minimum.
    #[serde(default)]
    pub language_min: BTreeMap<String, f64>,
    #[serde(default)]
    pub bounds: BTreeMap<String, Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub kept: bool,
    /// Every violated dimension, in dimension order; `"language"` when the
    /// language condition fails.
    pub failed_dimensions: Vec<String>,
}

impl ThresholdConfig {
    /// A config with no quality bounds that accepts the given languages.
    pub fn permissive(collection_id: impl Into<String>, languages: &[&str]) -> Self {
        ThresholdConfig {
            collection_id: collection_id.into(),
            version: 1,
            note: String::new(),
            target_languages: languages.iter().map(|s| s.to_string()).collect(),
            language_min: BTreeMap::new(),
            bounds: BTreeMap::new(),
        }
    }

    /// Reference defaults. These are starting points for per-collection
    /// tuning, not calibrated values.
    pub fn reference(collection_id: impl Into<String>) -> Self {
        let mut cfg = Self::permissive(collection_id, &crate::langid::CURATION_LANGUAGES);
        cfg.note = "reference defaults".into();
        cfg.bounds = BTreeMap::from([
            ("min_chars".into(), Bound::at_least(200.0)),
            ("mean_word_length".into(), Bound::between(3.0, 10.0)),
            ("frac_duplicate_lines".into(), Bound::at_most(0.3)),
            ("frac_chars_in_duplicate_lines".into(), Bound::at_most(0.2)),
            ("frac_lines_end_punct".into(), Bound::at_least(0.1)),
            ("symbol_word_ratio".into(), Bound::at_most(0.1)),
            ("frac_alpha_words".into(), Bound::at_least(0.8)),
            ("stopword_hits".into(), Bound::at_least(2.0)),
            ("top_bigram_frac".into(), Bound::at_most(0.2)),
            ("frac_bullet_lines".into(), Bound::at_most(0.9)),
            ("max_line_repetition_run".into(), Bound::at_most(3.0)),
        ]);
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_languages.is_empty() {
            return Err(Error::config(format!("{}: target language set is empty", self.collection_id)));
        }
        for (name, bound) in &self.bounds {
            if !is_dimension(name) {
                return Err(Error::config(format!("{}: unknown dimension `{name}`", self.collection_id)));
            }
            if let (Some(l), Some(u)) = (bound.lower, bound.upper) {
                if l > u {
                    return Err(Error::config(format!("{}: lower bound {l} exceeds upper {u} on `{name}`", self.collection_id)));
                }
            }
        }
        Ok(())
    }

    pub fn path_in(dir: &Path, collection_id: &str) -> PathBuf {
        dir.join(format!("{collection_id}.json"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cfg: ThresholdConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Checks a scored document against every bound and the language condition.
pub fn apply_thresholds(doc: &Document, cfg: &ThresholdConfig) -> Result<FilterVerdict> {
    cfg.validate()?;
    let quality = doc
        .quality_scores
        .as_ref()
        .ok_or_else(|| Error::config(format!("document {} has no quality scores", doc.doc_id)))?;
    let language = doc
        .language_scores
        .as_ref()
        .ok_or_else(|| Error::config(format!("document {} has no language scores", doc.doc_id)))?;

    let mut failed: Vec<String> = DIMENSIONS
        .iter()
        .filter(|d| {
            cfg.bounds
                .get(**d)
                .is_some_and(|b| !b.admits(quality.get(d).expect("known dimension")))
        })
        .map(|d| d.to_string())
        .collect();

    let min = cfg.language_min.get(&language.top).copied().unwrap_or(0.0);
    if !cfg.target_languages.contains(&language.top) || language.top_score < min {
        failed.push("language".into());
    }
    Ok(FilterVerdict { kept: failed.is_empty(), failed_dimensions: failed })
}
