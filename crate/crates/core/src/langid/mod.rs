//! Character n-gram language scoring.
//!
//! Each [`LanguageProfile`] holds relative frequencies of character 1-, 2-
//! and 3-grams. A text is scored by cosine similarity against every profile
//! and the similarities are turned into a distribution with a
//! temperature-1 softmax.

mod profile;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use profile::{bundled_profiles, train_profile, train_profiles, LanguageProfile, ProfileTrainer, PROFILE_FORMAT_VERSION};

/// The five languages inspected during curation.
pub const CURATION_LANGUAGES: [&str; 5] = ["dan", "deu", "eng", "fry", "nld"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageScores {
    pub scores: BTreeMap<String, f64>,
    pub top: String,
    pub top_score: f64,
}

impl LanguageScores {
    /// Builds scores from a distribution; `top` is the argmax with ties
    /// going to the lexicographically smallest code.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, f64)>) -> Self {
        let scores: BTreeMap<String, f64> = pairs.into_iter().collect();
        let (top, top_score) = scores
            .iter()
            .fold(None::<(&String, f64)>, |best, (code, &s)| match best {
                Some((_, b)) if b >= s => best,
                _ => Some((code, s)),
            })
            .map(|(c, s)| (c.clone(), s))
            .unwrap_or_default();
        LanguageScores { scores, top, top_score }
    }

    pub fn get(&self, code: &str) -> f64 {
        self.scores.get(code).copied().unwrap_or(0.0)
    }
}

/// Scores `text` against every profile. Empty (or letter-free) text gets a
/// uniform distribution.
pub fn score_language(text: &str, profiles: &[LanguageProfile]) -> LanguageScores {
    assert!(!profiles.is_empty(), "score_language needs at least one profile");
    let grams = profile::text_vector(text);
    let sims: Vec<(String, f64)> = if grams.is_empty() {
        profiles.iter().map(|p| (p.language.clone(), 0.0)).collect()
    } else {
        profiles.iter().map(|p| (p.language.clone(), p.cosine(&grams))).collect()
    };
    LanguageScores::from_pairs(softmax(sims))
}

fn softmax(values: Vec<(String, f64)>) -> Vec<(String, f64)> {
    let max = values.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<(String, f64)> = values.into_iter().map(|(k, v)| (k, (v - max).exp())).collect();
    let total: f64 = exps.iter().map(|(_, e)| e).sum();
    exps.into_iter().map(|(k, e)| (k, e / total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn five() -> Vec<LanguageProfile> {
        bundled_profiles()
            .iter()
            .filter(|p| CURATION_LANGUAGES.contains(&p.language.as_str()))
            .cloned()
            .collect()
    }

    #[test]
    fn empty_text_is_uniform() {
        let s = score_language("", &five());
        assert_eq!(s.scores.len(), 5);
        for v in s.scores.values() {
            assert!((v - 0.2).abs() < 1e-12);
        }
        assert_eq!(s.top, "dan");
    }

    #[test]
    fn dutch_sentence_against_dutch_and_english() {
        let profiles: Vec<_> = bundled_profiles()
            .iter()
            .filter(|p| p.language == "nld" || p.language == "eng")
            .cloned()
            .collect();
        let text = "De gemeenteraad heeft gisteravond na een lange vergadering besloten om het nieuwe \
                    zwembad toch te bouwen, ondanks de zorgen van bewoners over de kosten en de \
                    verkeersdrukte in de wijk rond het station.";
        assert!(text.chars().count() >= 200);
        assert_eq!(score_language(text, &profiles).top, "nld");
    }

    #[test]
    fn training_text_classifies_as_its_language() {
        let profiles = bundled_profiles();
        for (code, corpus) in profile::SEED_CORPORA {
            assert_eq!(score_language(corpus, profiles).top, *code);
        }
    }

    #[test]
    fn ties_break_lexicographically() {
        let s = LanguageScores::from_pairs([("nld".into(), 0.5), ("afr".into(), 0.5)]);
        assert_eq!(s.top, "afr");
        assert_eq!(s.top_score, 0.5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn scores_form_a_distribution(text in "\\PC{0,200}") {
            let s = score_language(&text, bundled_profiles());
            let sum: f64 = s.scores.values().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            prop_assert!(s.scores.values().all(|v| (0.0..=1.0).contains(v)));
            prop_assert_eq!(s.top_score, s.scores[&s.top]);
        }

        #[test]
        fn whitespace_runs_do_not_matter(words in proptest::collection::vec("[a-zA-Zéëï]{1,8}", 1..20), gaps in proptest::collection::vec("[ \t\n]{1,4}", 20)) {
            let single = words.join(" ");
            let spaced: String = words.iter().zip(gaps.iter().cycle()).map(|(w, g)| format!("{w}{g}")).collect();
            let a = score_language(&single, bundled_profiles());
            let b = score_language(&spaced, bundled_profiles());
            prop_assert_eq!(a.top, b.top);
            for (k, v) in &a.scores {
                prop_assert!((v - b.scores[k]).abs() < 1e-12);
            }
        }

        #[test]
        fn profile_order_is_irrelevant(text in "[a-z ]{0,80}", rot in 0usize..9) {
            let mut rotated = bundled_profiles().to_vec();
            rotated.rotate_left(rot);
            let a = score_language(&text, bundled_profiles());
            let b = score_language(&text, &rotated);
            prop_assert_eq!(&a.top, &b.top);
            for (k, v) in &a.scores {
                prop_assert!((v - b.scores[k]).abs() < 1e-12);
            }
        }
    }
}
