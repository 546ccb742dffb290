use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const PROFILE_FORMAT_VERSION: u32 = 1;

/// Bundled seed corpora, one per language (ISO 639-3).
pub(crate) const SEED_CORPORA: &[(&str, &str)] = &[
    ("afr", include_str!("../../data/langid/afr.txt")),
    ("dan", include_str!("../../data/langid/dan.txt")),
    ("deu", include_str!("../../data/langid/deu.txt")),
    ("eng", include_str!("../../data/langid/eng.txt")),
    ("fra", include_str!("../../data/langid/fra.txt")),
    ("fry", include_str!("../../data/langid/fry.txt")),
    ("ita", include_str!("../../data/langid/ita.txt")),
    ("nld", include_str!("../../data/langid/nld.txt")),
    ("spa", include_str!("../../data/langid/spa.txt")),
];

const SEED_PROVENANCE: &str = "bundled seed corpus (hand-written sample text)";

/// Relative n-gram frequencies for one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile", into = "ProfileFile")]
pub struct LanguageProfile {
    pub language: String,
    pub provenance: String,
    /// Index 0 holds unigrams, 1 bigrams, 2 trigrams; each sums to 1.
    pub ngrams: [BTreeMap<String, f64>; 3],
    norms: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    format_version: u32,
    language: String,
    provenance: String,
    ngrams: BTreeMap<String, BTreeMap<String, f64>>,
}

impl TryFrom<ProfileFile> for LanguageProfile {
    type Error = String;

    fn try_from(file: ProfileFile) -> std::result::Result<Self, String> {
        if file.format_version != PROFILE_FORMAT_VERSION {
            return Err(format!("unsupported profile format version {}", file.format_version));
        }
        let mut ngrams: [BTreeMap<String, f64>; 3] = Default::default();
        for (n, table) in file.ngrams {
            let idx: usize = n.parse().map_err(|_| format!("bad n-gram order `{n}`"))?;
            if !(1..=3).contains(&idx) {
                return Err(format!("n-gram order {idx} out of range"));
            }
            ngrams[idx - 1] = table;
        }
        if ngrams.iter().all(BTreeMap::is_empty) {
            return Err("empty profile".into());
        }
        Ok(LanguageProfile::from_tables(file.language, file.provenance, ngrams))
    }
}

impl From<LanguageProfile> for ProfileFile {
    fn from(p: LanguageProfile) -> Self {
        ProfileFile {
            format_version: PROFILE_FORMAT_VERSION,
            language: p.language,
            provenance: p.provenance,
            ngrams: p.ngrams.into_iter().enumerate().map(|(i, t)| ((i + 1).to_string(), t)).collect(),
        }
    }
}

impl LanguageProfile {
    fn from_tables(language: String, provenance: String, ngrams: [BTreeMap<String, f64>; 3]) -> Self {
        let norms = [0, 1, 2].map(|i| root_norm(ngrams[i].values()));
        LanguageProfile { language, provenance, ngrams, norms }
    }

    pub fn frequency(&self, gram: &str) -> f64 {
        let n = gram.chars().count();
        if (1..=3).contains(&n) {
            self.ngrams[n - 1].get(gram).copied().unwrap_or(0.0)
        } else {
            0.0
        }
    }

    /// Mean over n-gram orders of the cosine between square-rooted
    /// frequency vectors. Rooting damps the handful of very common n-grams
    /// that most languages share.
    pub(crate) fn cosine(&self, text: &TextVector) -> f64 {
        let mut total = 0.0;
        let mut orders = 0;
        for i in 0..3 {
            if self.norms[i] == 0.0 || text.norms[i] == 0.0 {
                continue;
            }
            let dot: f64 = text.grams[i]
                .iter()
                .filter_map(|(g, v)| self.ngrams[i].get(g).map(|p| (v * p).sqrt()))
                .sum();
            total += dot / (self.norms[i] * text.norms[i]);
            orders += 1;
        }
        if orders == 0 {
            0.0
        } else {
            (total / orders as f64).clamp(0.0, 1.0)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Training options.
#[derive(Debug, Clone)]
pub struct ProfileTrainer {
    /// Minimum characters of training text per language.
    pub min_chars: usize,
    /// Most frequent n-grams kept per order.
    pub max_ngrams: usize,
}

impl Default for ProfileTrainer {
    fn default() -> Self {
        ProfileTrainer { min_chars: 1000, max_ngrams: 3000 }
    }
}

impl ProfileTrainer {
    pub fn train<'a>(&self, language: &str, texts: impl IntoIterator<Item = &'a str>, provenance: &str) -> Result<LanguageProfile> {
        let mut counts: [HashMap<String, u64>; 3] = Default::default();
        let mut chars = 0usize;
        for text in texts {
            chars += text.chars().count();
            for_each_gram(text, |n, g| *counts[n - 1].entry(g.to_string()).or_default() += 1);
        }
        if chars < self.min_chars || counts.iter().all(HashMap::is_empty) {
            return Err(Error::InsufficientData { language: language.to_string(), chars, needed: self.min_chars });
        }
        let ngrams = counts.map(|table| {
            let mut entries: Vec<(String, u64)> = table.into_iter().collect();
            entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            entries.truncate(self.max_ngrams);
            let total: u64 = entries.iter().map(|(_, c)| c).sum();
            entries.into_iter().map(|(g, c)| (g, c as f64 / total as f64)).collect::<BTreeMap<_, _>>()
        });
        Ok(LanguageProfile::from_tables(language.to_string(), provenance.to_string(), ngrams))
    }

    /// Groups `(language, text)` pairs by label and trains one profile per language,
    /// returned in code order.
    pub fn train_all<'a>(&self, corpus: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Vec<LanguageProfile>> {
        let mut grouped: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (lang, text) in corpus {
            grouped.entry(lang).or_default().push(text);
        }
        grouped
            .into_iter()
            .map(|(lang, texts)| self.train(lang, texts, "user corpus"))
            .collect()
    }
}

pub fn train_profile<'a>(language: &str, texts: impl IntoIterator<Item = &'a str>) -> Result<LanguageProfile> {
    ProfileTrainer::default().train(language, texts, "user corpus")
}

pub fn train_profiles<'a>(corpus: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Vec<LanguageProfile>> {
    ProfileTrainer::default().train_all(corpus)
}

/// Profiles for afr, dan, deu, eng, fra, fry, ita, nld and spa, trained once
/// from the bundled seed corpora.
pub fn bundled_profiles() -> &'static [LanguageProfile] {
    static PROFILES: OnceLock<Vec<LanguageProfile>> = OnceLock::new();
    PROFILES.get_or_init(|| {
        SEED_CORPORA
            .iter()
            .map(|(code, text)| {
                ProfileTrainer::default()
                    .train(code, [*text], SEED_PROVENANCE)
                    .expect("seed corpora are large enough")
            })
            .collect()
    })
}

/// Calls `f(n, gram)` for every 1-, 2- and 3-gram. Words are maximal runs of
/// letters, lowercased; 2- and 3-grams see a space on each side of a word.
fn for_each_gram(text: &str, mut f: impl FnMut(usize, &str)) {
    let mut padded = String::new();
    let mut buf: Vec<(usize, usize)> = Vec::new();
    for word in text.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty()) {
        padded.clear();
        padded.push(' ');
        padded.extend(word.chars().flat_map(char::to_lowercase));
        padded.push(' ');
        buf.clear();
        buf.extend(padded.char_indices().map(|(i, c)| (i, i + c.len_utf8())));
        for &(s, e) in &buf[1..buf.len() - 1] {
            f(1, &padded[s..e]);
        }
        for n in 2..=3 {
            for w in buf.windows(n) {
                f(n, &padded[w[0].0..w[n - 1].1]);
            }
        }
    }
}

/// Euclidean norm of the square-rooted values.
fn root_norm<'a>(values: impl Iterator<Item = &'a f64>) -> f64 {
    values.sum::<f64>().sqrt()
}

pub(crate) struct TextVector {
    grams: [HashMap<String, f64>; 3],
    norms: [f64; 3],
}

impl TextVector {
    pub(crate) fn is_empty(&self) -> bool {
        self.grams.iter().all(HashMap::is_empty)
    }
}

pub(crate) fn text_vector(text: &str) -> TextVector {
    let mut grams: [HashMap<String, f64>; 3] = Default::default();
    for_each_gram(text, |n, g| *grams[n - 1].entry(g.to_string()).or_default() += 1.0);
    for table in &mut grams {
        let total: f64 = table.values().sum();
        table.values_mut().for_each(|c| *c /= total);
    }
    let norms = [0, 1, 2].map(|i| root_norm(grams[i].values()));
    TextVector { grams, norms }
}
