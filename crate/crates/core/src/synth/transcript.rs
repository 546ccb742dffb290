use std::sync::OnceLock;

use regex::Regex;

fn marker() -> &'static Regex {
    static R: OnceLock<Regex> = OnceLock::new();
    R.get_or_init(|| Regex::new(r"\[[a-z]+(?:[-_][a-z]+)*\]").unwrap())
}

fn leading_timestamp() -> &'static Regex {
    static R: OnceLock<Regex> = OnceLock::new();
    R.get_or_init(|| Regex::new(r"^(?:[0-9]{1,2}:)?[0-9]{1,2}:[0-9]{2}(?:\s+|$)").unwrap())
}

fn clean_line_once(line: &str) -> String {
    let without_markers = marker().replace_all(line, " ");
    let collapsed = without_markers.split_whitespace().collect::<Vec<_>>().join(" ");
    leading_timestamp().replace(&collapsed, "").trim().to_string()
}

fn clean_line(line: &str) -> String {
    let mut current = clean_line_once(line);
    loop {
        let next = clean_line_once(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Removes non-speech markers such as `[laughter]` or `[music]`, drops
/// `hh:mm:ss` / `mm:ss` timestamps at line starts and collapses the spaces
/// left behind. Lines that consisted only of markers and timestamps are
/// dropped; blank input lines are kept except at the end. Idempotent.
pub fn clean_transcript(text: &str) -> String {
    let mut out: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            out.push(String::new());
            continue;
        }
        let cleaned = clean_line(line);
        if !cleaned.is_empty() {
            out.push(cleaned);
        }
    }
    while out.last().is_some_and(String::is_empty) {
        out.pop();
    }
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_written_cases() {
        let cases = [
            ("hi [laughter] there", "hi there"),
            ("00:12 hello", "hello"),
            ("01:02:03 goedemorgen allemaal", "goedemorgen allemaal"),
            ("[music]", ""),
            ("[music] 00:14 en dan", "en dan"),
            ("00:14 [applause] dank u", "dank u"),
            ("we spraken om 10:30 af", "we spraken om 10:30 af"),
            ("[Laughter] blijft staan", "[Laughter] blijft staan"),
            ("[twee woorden] blijft", "[twee woorden] blijft"),
            ("[background-noise] ruis", "ruis"),
            ("ja [inaudible] nee [crosstalk]", "ja nee"),
            ("  ruimte   rondom  ", "ruimte rondom"),
            ("12:00", ""),
            ("1:2 is geen tijd", "1:2 is geen tijd"),
            ("00:12 00:15 dubbel", "dubbel"),
            ("[la[x]ughter] genest", "[la ughter] genest"),
            ("tekst zonder markers", "tekst zonder markers"),
            ("[123] cijfers blijven", "[123] cijfers blijven"),
            ("00:05:10\tna een tab", "na een tab"),
            ("einde [music]", "einde"),
        ];
        for (input, expected) in cases {
            assert_eq!(clean_transcript(input), expected, "{input:?}");
        }
    }

    #[test]
    fn multi_line() {
        let text = "00:01 eerste regel\n[music]\n\n00:09 tweede [laughter] regel";
        assert_eq!(clean_transcript(text), "eerste regel\n\ntweede regel");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn idempotent(parts in proptest::collection::vec(
            prop_oneof!["[a-z]{1,6}", "\\[[a-z]{1,5}\\]", "[0-9]{1,2}:[0-9]{2}", "[\\[\\] \n]", "[A-Z][a-z]{0,4}"], 0..14)) {
            let text = parts.join(" ");
            let once = clean_transcript(&text);
            prop_assert_eq!(clean_transcript(&once), once);
        }
    }
}
