//! Eleven heuristic quality dimensions in the style of the C4 / Gopher rules.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Dimension names, in the order they appear in [`QualityScores`].
pub const DIMENSIONS: [&str; 11] = [
    "min_chars",
    "mean_word_length",
    "frac_duplicate_lines",
    "frac_chars_in_duplicate_lines",
    "frac_lines_end_punct",
    "symbol_word_ratio",
    "frac_alpha_words",
    "stopword_hits",
    "top_bigram_frac",
    "frac_bullet_lines",
    "max_line_repetition_run",
];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QualityScores {
    pub min_chars: f64,
    pub mean_word_length: f64,
    pub frac_duplicate_lines: f64,
    pub frac_chars_in_duplicate_lines: f64,
    pub frac_lines_end_punct: f64,
    pub symbol_word_ratio: f64,
    pub frac_alpha_words: f64,
    pub stopword_hits: f64,
    pub top_bigram_frac: f64,
    pub frac_bullet_lines: f64,
    pub max_line_repetition_run: f64,
}

impl QualityScores {
    /// Value of a dimension by name.
    pub fn get(&self, dimension: &str) -> Option<f64> {
        Some(match dimension {
            "min_chars" => self.min_chars,
            "mean_word_length" => self.mean_word_length,
            "frac_duplicate_lines" => self.frac_duplicate_lines,
            "frac_chars_in_duplicate_lines" => self.frac_chars_in_duplicate_lines,
            "frac_lines_end_punct" => self.frac_lines_end_punct,
            "symbol_word_ratio" => self.symbol_word_ratio,
            "frac_alpha_words" => self.frac_alpha_words,
            "stopword_hits" => self.stopword_hits,
            "top_bigram_frac" => self.top_bigram_frac,
            "frac_bullet_lines" => self.frac_bullet_lines,
            "max_line_repetition_run" => self.max_line_repetition_run,
            _ => return None,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        DIMENSIONS.iter().map(move |d| (*d, self.get(d).expect("known dimension")))
    }
}

pub fn is_dimension(name: &str) -> bool {
    DIMENSIONS.contains(&name)
}

// 30 high-frequency function words per language.
const STOPWORDS: &[(&str, &str)] = &[
    ("afr", "die en van in is dat nie het te wat op vir met hy sy ek ons hulle word was ook sal aan om deur by maar of as na"),
    ("dan", "og i at det en den til er som på de med han af for ikke der var mig sig men et har om vi min havde fra hun kan"),
    ("deu", "der die und in den von zu das mit sich des auf für ist im dem nicht ein eine als auch es an werden aus er hat dass sie wird"),
    ("eng", "the of and to in a is that for it as was with be by on not he this are or his from at which but have an they you"),
    ("fra", "de la le et les des en un une du est que pour qui dans pas sur au par plus ne ce il se avec sont son aux ou je"),
    ("fry", "de it en fan in is dat op te mei net foar wie hy sy se ik wy ek oan om troch by mar as nei dy't hat binne wat"),
    ("ita", "di e il la che in a per un è non una del le si da con i dei della al gli alla sono come più ma anche nel ha"),
    ("nld", "de en van het een in is dat op te zijn met voor niet aan er ook als maar om door bij nog wordt dan uit naar tot hij zij"),
    ("spa", "de la que el en y a los del se las por un para con no una su al lo como más pero sus le ya o este es me"),
];

fn stoplist(language: Option<&str>) -> &'static HashSet<&'static str> {
    static UNION: OnceLock<HashSet<&'static str>> = OnceLock::new();
    static PER_LANG: OnceLock<HashMap<&'static str, HashSet<&'static str>>> = OnceLock::new();
    let per_lang = PER_LANG.get_or_init(|| {
        STOPWORDS
            .iter()
            .map(|(l, words)| (*l, words.split_ascii_whitespace().collect()))
            .collect()
    });
    match language.and_then(|l| per_lang.get(l)) {
        Some(set) => set,
        None => UNION.get_or_init(|| per_lang.values().flatten().copied().collect()),
    }
}

/// Stopword list for `language`, if one is bundled.
pub fn stopwords(language: &str) -> Option<Vec<&'static str>> {
    STOPWORDS
        .iter()
        .find(|(l, _)| *l == language)
        .map(|(_, w)| w.split_ascii_whitespace().collect())
}

/// Scores normalized text, counting stopwords from every bundled language.
pub fn score_quality(text: &str) -> QualityScores {
    score_quality_for(text, None)
}

/// As [`score_quality`], restricting stopword hits to one language's list
/// when `language` has one.
pub fn score_quality_for(text: &str, language: Option<&str>) -> QualityScores {
    let words: Vec<&str> = text.split_whitespace().collect();
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let word_total = words.len() as f64;
    let line_total = lines.len() as f64;
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };

    let mut seen: HashSet<&str> = HashSet::new();
    let (mut dup_lines, mut dup_chars, mut line_chars) = (0usize, 0usize, 0usize);
    for line in &lines {
        let n = line.chars().count();
        line_chars += n;
        if !seen.insert(line) {
            dup_lines += 1;
            dup_chars += n;
        }
    }

    let max_run = lines
        .chunk_by(|a, b| a == b)
        .map(<[&str]>::len)
        .max()
        .unwrap_or(0);

    let end_punct = lines
        .iter()
        .filter(|l| l.ends_with(['.', '!', '?', '"', '»']))
        .count();
    let bullets = lines
        .iter()
        .filter(|l| l.starts_with(['-', '*', '•']))
        .count();

    let symbols = text.chars().filter(|c| matches!(c, '#' | '…' | '{' | '}')).count() + text.matches("...").count();

    let alpha_words = words.iter().filter(|w| w.chars().any(char::is_alphabetic)).count();
    let stop = stoplist(language);
    let stop_hits = words
        .iter()
        .filter(|w| {
            let bare = w.trim_matches(|c: char| !c.is_alphanumeric() && c != '\'').to_lowercase();
            stop.contains(bare.as_str())
        })
        .count();

    let lowered: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    let mut bigrams: HashMap<(&str, &str), usize> = HashMap::new();
    for pair in lowered.windows(2) {
        *bigrams.entry((&pair[0], &pair[1])).or_default() += 1;
    }
    let top_bigram = bigrams.values().copied().max().unwrap_or(0);

    let word_chars: usize = words.iter().map(|w| w.chars().count()).sum();

    QualityScores {
        min_chars: text.chars().count() as f64,
        mean_word_length: ratio(word_chars as f64, word_total),
        frac_duplicate_lines: ratio(dup_lines as f64, line_total),
        frac_chars_in_duplicate_lines: ratio(dup_chars as f64, line_chars as f64),
        frac_lines_end_punct: ratio(end_punct as f64, line_total),
        symbol_word_ratio: ratio(symbols as f64, word_total),
        frac_alpha_words: ratio(alpha_words as f64, word_total),
        stopword_hits: stop_hits as f64,
        top_bigram_frac: ratio(2.0 * top_bigram as f64, word_total).min(1.0),
        frac_bullet_lines: ratio(bullets as f64, line_total),
        max_line_repetition_run: max_run as f64,
    }
}
