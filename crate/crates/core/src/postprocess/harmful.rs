//! Wordlist-based harmful language flagging.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::document::Document;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    #[default]
    None,
    Review,
    Drop,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::None => "none",
            Severity::Review => "review",
            Severity::Drop => "drop",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(Severity::None),
            "review" => Ok(Severity::Review),
            "drop" => Ok(Severity::Drop),
            other => Err(Error::config(format!("unknown severity {other:?}"))),
        }
    }
}

/// Terms are stored as lowercase word sequences.
#[derive(Debug, Clone)]
pub struct Wordlist {
    terms: HashMap<Vec<String>, (String, Severity)>,
    longest: usize,
}

impl Wordlist {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Severity)>,
        S: AsRef<str>,
    {
        let mut terms = HashMap::new();
        let mut longest = 0;
        for (term, severity) in entries {
            let term = term.as_ref().trim();
            let words: Vec<String> = tokenize(term).into_iter().map(|(s, e)| term[s..e].to_lowercase()).collect();
            if words.is_empty() {
                continue;
            }
            longest = longest.max(words.len());
            let slot = terms.entry(words).or_insert((term.to_string(), severity));
            if severity > slot.1 {
                slot.1 = severity;
            }
        }
        if terms.is_empty() {
            return Err(Error::config("harmful-language wordlist is empty"));
        }
        Ok(Wordlist { terms, longest })
    }

    /// Reads `term<TAB>severity` lines. Blank lines and `#` comments are skipped.
    pub fn from_tsv<R: BufRead>(reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (term, severity) = line
                .split_once('\t')
                .ok_or_else(|| Error::config(format!("wordlist line {}: expected term<TAB>severity", i + 1)))?;
            entries.push((term.to_string(), severity.parse()?));
        }
        Wordlist::new(entries)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub term: String,
    pub start: usize,
    pub end: usize,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HarmReport {
    pub severity: Severity,
    pub hits: Vec<Hit>,
}

/// Byte spans of maximal alphanumeric runs.
fn tokenize(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            out.push((s, i));
        }
    }
    if let Some(s) = start {
        out.push((s, text.len()));
    }
    out
}

/// Scans left to right and takes the longest term starting at each word.
pub fn flag_harmful(text: &str, wordlist: &Wordlist) -> HarmReport {
    let tokens = tokenize(text);
    let lowered: Vec<String> = tokens.iter().map(|&(s, e)| text[s..e].to_lowercase()).collect();
    let mut report = HarmReport::default();
    let mut i = 0;
    while i < tokens.len() {
        let max_len = wordlist.longest.min(tokens.len() - i);
        let found = (1..=max_len).rev().find_map(|k| wordlist.terms.get(&lowered[i..i + k]).map(|t| (k, t)));
        match found {
            Some((k, (term, severity))) => {
                report.hits.push(Hit {
                    term: term.clone(),
                    start: tokens[i].0,
                    end: tokens[i + k - 1].1,
                    severity: *severity,
                });
                report.severity = report.severity.max(*severity);
                i += k;
            }
            None => i += 1,
        }
    }
    report
}

/// What to do with a document whose severity is `drop`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmfulAction {
    #[default]
    Drop,
    /// Keep the document and only report it, for archives kept for their historical value.
    Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmFlag {
    pub doc_id: String,
    pub severity: Severity,
    pub dropped: bool,
    pub hits: Vec<Hit>,
}

/// Applies the wordlist to every document. Flags are returned for each document with any hit.
pub fn filter_harmful(docs: Vec<Document>, wordlist: &Wordlist, action: HarmfulAction) -> (Vec<Document>, Vec<HarmFlag>) {
    let mut kept = Vec::with_capacity(docs.len());
    let mut flags = Vec::new();
    for doc in docs {
        let report = flag_harmful(&doc.text, wordlist);
        let dropped = report.severity == Severity::Drop && action == HarmfulAction::Drop;
        if !report.hits.is_empty() {
            flags.push(HarmFlag { doc_id: doc.doc_id.clone(), severity: report.severity, dropped, hits: report.hits });
        }
        if !dropped {
            kept.push(doc);
        }
    }
    (kept, flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn list(entries: &[(&str, Severity)]) -> Wordlist {
        Wordlist::new(entries.iter().map(|(t, s)| (*t, *s))).unwrap()
    }

    #[test]
    fn no_match_is_none() {
        let w = list(&[("rot", Severity::Review)]);
        let r = flag_harmful("een rotte appel", &w);
        assert_eq!(r.severity, Severity::None);
        assert!(r.hits.is_empty());
    }

    #[test]
    fn drop_term() {
        let w = list(&[("kwaad", Severity::Drop), ("boos", Severity::Review)]);
        let r = flag_harmful("Heel KWAAD, niet boos.", &w);
        assert_eq!(r.severity, Severity::Drop);
        assert_eq!(r.hits.len(), 2);
        assert_eq!(&"Heel KWAAD, niet boos."[r.hits[0].start..r.hits[0].end], "KWAAD");
    }

    #[test]
    fn longest_match_wins() {
        let w = list(&[("x", Severity::Review), ("x y", Severity::Drop)]);
        let r = flag_harmful("x y", &w);
        assert_eq!(r.severity, Severity::Drop);
        assert_eq!(r.hits, [Hit { term: "x y".into(), start: 0, end: 3, severity: Severity::Drop }]);
    }

    #[test]
    fn empty_wordlist_is_config_error() {
        let empty: [(&str, Severity); 0] = [];
        assert!(matches!(Wordlist::new(empty), Err(Error::Config(_))));
        assert!(matches!(Wordlist::from_tsv("\n# nothing\n".as_bytes()), Err(Error::Config(_))));
    }

    #[test]
    fn tsv_parse() {
        let w = Wordlist::from_tsv("foo\tdrop\nfoo bar\treview\n".as_bytes()).unwrap();
        assert_eq!(w.len(), 2);
        assert!(Wordlist::from_tsv("foo drop\n".as_bytes()).is_err());
        assert!(Wordlist::from_tsv("foo\tsevere\n".as_bytes()).is_err());
    }

    #[test]
    fn flag_action_keeps_documents() {
        let w = list(&[("kwaad", Severity::Drop)]);
        let docs = vec![Document::new("c", "https://a.nl/1", "kwaad"), Document::new("c", "https://a.nl/2", "goed")];
        let (kept, flags) = filter_harmful(docs.clone(), &w, HarmfulAction::Drop);
        assert_eq!(kept.len(), 1);
        assert!(flags[0].dropped);
        let (kept, flags) = filter_harmful(docs, &w, HarmfulAction::Flag);
        assert_eq!(kept.len(), 2);
        assert!(!flags[0].dropped);
    }

    /// Every whole-word, case-insensitive occurrence of every term, found by
    /// trying all substrings. Occurrences contained in a longer one are discarded.
    fn brute_force(text: &str, entries: &[(&str, Severity)]) -> Severity {
        let lower = text.to_lowercase();
        let is_word = |c: Option<char>| c.is_some_and(char::is_alphanumeric);
        let mut occ = Vec::new();
        for start in 0..=lower.len() {
            for end in start..=lower.len() {
                if !lower.is_char_boundary(start) || !lower.is_char_boundary(end) {
                    continue;
                }
                let sub = &lower[start..end];
                let sub_words: Vec<&str> = sub.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).collect();
                for (term, sev) in entries {
                    let term_words: Vec<String> = term.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()).map(str::to_lowercase).collect();
                    if sub_words != term_words || sub.is_empty() {
                        continue;
                    }
                    let bounded = is_word(sub.chars().next())
                        && is_word(sub.chars().last())
                        && !is_word(lower[..start].chars().last())
                        && !is_word(lower[end..].chars().next());
                    if bounded {
                        occ.push((start, end, *sev));
                    }
                }
            }
        }
        occ.iter()
            .filter(|a| !occ.iter().any(|b| b.0 <= a.0 && a.1 <= b.1 && (b.1 - b.0) > (a.1 - a.0)))
            .map(|o| o.2)
            .max()
            .unwrap_or(Severity::None)
    }

    proptest! {
        #[test]
        fn matches_brute_force(words in proptest::collection::vec(prop_oneof!["x", "y", "z", "X", "xy"], 0..8),
                               seps in proptest::collection::vec(prop_oneof![" ", ", ", "-"], 8)) {
            let text: String = words.iter().zip(&seps).map(|(w, s)| format!("{w}{s}")).collect();
            let entries = [("x", Severity::Review), ("x y", Severity::Drop), ("z", Severity::None)];
            prop_assert_eq!(flag_harmful(&text, &list(&entries)).severity, brute_force(&text, &entries));
        }
    }
}
