//! Pattern-based personal data scrubbing.
//!
//! Five classes are recognised: e-mail addresses, phone numbers (E.164 and
//! Dutch national formats), IBANs with a valid mod-97 checksum, nine-digit
//! numbers passing the Dutch BSN eleven-test, and credentials embedded in
//! URLs. Each match is replaced by `[PII:<class>]`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::document::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiiClass {
    Credentials,
    Email,
    Iban,
    Phone,
    Bsn,
}

impl PiiClass {
    /// Earlier classes win when matches overlap.
    pub const ALL: [PiiClass; 5] = [PiiClass::Credentials, PiiClass::Email, PiiClass::Iban, PiiClass::Phone, PiiClass::Bsn];

    pub fn name(self) -> &'static str {
        match self {
            PiiClass::Credentials => "credentials",
            PiiClass::Email => "email",
            PiiClass::Iban => "iban",
            PiiClass::Phone => "phone",
            PiiClass::Bsn => "bsn",
        }
    }

    pub fn placeholder(self) -> String {
        format!("[PII:{}]", self.name())
    }
}

/// One replaced span, with byte offsets into the original text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub class: PiiClass,
    pub start: usize,
    pub end: usize,
    pub original: String,
    pub placeholder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCount {
    pub pattern_name: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrubReport {
    pub doc_id: String,
    /// Only classes with at least one replacement are listed.
    pub replacements: Vec<PatternCount>,
    /// Set when the output still contains an `@` or a run of 7+ digits.
    pub residual_risk_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scrubbed {
    pub text: String,
    pub replacements: Vec<Replacement>,
}

impl Scrubbed {
    pub fn report(&self, doc_id: &str) -> ScrubReport {
        let mut counts: BTreeMap<PiiClass, usize> = BTreeMap::new();
        for r in &self.replacements {
            *counts.entry(r.class).or_default() += 1;
        }
        ScrubReport {
            doc_id: doc_id.to_string(),
            replacements: counts
                .into_iter()
                .map(|(c, n)| PatternCount { pattern_name: c.name().to_string(), count: n })
                .collect(),
            residual_risk_flag: residual_risk(&self.text),
        }
    }
}

struct Patterns {
    credentials: Regex,
    email: Regex,
    iban: Regex,
    phone_intl: Regex,
    phone_nl: Regex,
    bsn: Regex,
    digit_run: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        credentials: Regex::new(r"\b[A-Za-z][A-Za-z0-9+.\-]*://([^\s/:@\[\]]+:[^\s/@\[\]]+)@").unwrap(),
        email: Regex::new(r"\b[A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(?:\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,}\b").unwrap(),
        iban: Regex::new(r"\b[A-Z]{2}[0-9]{2}(?: ?[A-Z0-9]{4}){2,7}(?: ?[A-Z0-9]{1,3})?\b").unwrap(),
        phone_intl: Regex::new(r"\+[1-9][0-9]{0,2}(?:[ \-]?\(0\))?(?:[ \-]?[0-9]){6,13}\b").unwrap(),
        phone_nl: Regex::new(r"(?:\(0[0-9]{1,3}\)|\b0[0-9]{1,3})(?:[ \-]?[0-9]){6,8}\b").unwrap(),
        bsn: Regex::new(r"\b[0-9]{9}\b").unwrap(),
        digit_run: Regex::new(r"[0-9]{7,}").unwrap(),
    })
}

fn digits(s: &str) -> Vec<u32> {
    s.chars().filter_map(|c| c.to_digit(10)).collect()
}

pub fn iban_checksum_ok(candidate: &str) -> bool {
    let compact: String = candidate.chars().filter(|c| !c.is_whitespace()).collect();
    if !(15..=34).contains(&compact.len()) {
        return false;
    }
    let rotated = compact[4..].chars().chain(compact[..4].chars());
    let mut rem: u64 = 0;
    for c in rotated {
        let v = match c {
            '0'..='9' => c as u64 - '0' as u64,
            'A'..='Z' => c as u64 - 'A' as u64 + 10,
            _ => return false,
        };
        rem = if v >= 10 { (rem * 100 + v) % 97 } else { (rem * 10 + v) % 97 };
    }
    rem == 1
}

/// Dutch "elfproef": weights 9..2 on the first eight digits, -1 on the last.
pub fn bsn_checksum_ok(candidate: &str) -> bool {
    let d = digits(candidate);
    if d.len() != 9 || d.iter().all(|x| *x == 0) {
        return false;
    }
    let sum: i64 = d[..8].iter().zip((2..=9).rev()).map(|(x, w)| (*x as i64) * w).sum::<i64>() - d[8] as i64;
    sum % 11 == 0
}

fn find_all(text: &str) -> Vec<(PiiClass, usize, usize)> {
    let p = patterns();
    let mut found = Vec::new();
    for c in p.credentials.captures_iter(text) {
        let m = c.get(1).expect("group");
        found.push((PiiClass::Credentials, m.start(), m.end()));
    }
    found.extend(p.email.find_iter(text).map(|m| (PiiClass::Email, m.start(), m.end())));
    found.extend(
        p.iban
            .find_iter(text)
            .filter(|m| iban_checksum_ok(m.as_str()))
            .map(|m| (PiiClass::Iban, m.start(), m.end())),
    );
    found.extend(
        p.phone_intl
            .find_iter(text)
            .filter(|m| (8..=15).contains(&digits(m.as_str()).len()))
            .map(|m| (PiiClass::Phone, m.start(), m.end())),
    );
    found.extend(
        p.phone_nl
            .find_iter(text)
            .filter(|m| digits(m.as_str()).len() == 10)
            .map(|m| (PiiClass::Phone, m.start(), m.end())),
    );
    found.extend(
        p.bsn
            .find_iter(text)
            .filter(|m| bsn_checksum_ok(m.as_str()))
            .map(|m| (PiiClass::Bsn, m.start(), m.end())),
    );
    found
}

/// Non-overlapping matches in one pass: higher-priority classes first, then leftmost, then longest.
fn detect_once(text: &str) -> Vec<(PiiClass, usize, usize)> {
    let mut found = find_all(text);
    found.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)));
    let mut accepted: Vec<(PiiClass, usize, usize)> = Vec::new();
    for m in found {
        if accepted.iter().all(|a| m.2 <= a.1 || m.1 >= a.2) {
            accepted.push(m);
        }
    }
    accepted.sort_by_key(|m| m.1);
    accepted
}

/// Text with `spans` replaced, plus `(rendered_start, original_start, len)` for each kept piece.
fn render(text: &str, spans: &[(PiiClass, usize, usize)]) -> (String, Vec<(usize, usize, usize)>) {
    let mut out = String::with_capacity(text.len());
    let mut kept = Vec::new();
    let mut last = 0;
    for &(class, start, end) in spans {
        kept.push((out.len(), last, start - last));
        out.push_str(&text[last..start]);
        out.push_str(&class.placeholder());
        last = end;
    }
    kept.push((out.len(), last, text.len() - last));
    out.push_str(&text[last..]);
    (out, kept)
}

/// PII spans in original byte offsets, sorted and disjoint.
///
/// Replacing a match can expose another one (an e-mail address glued to
/// stripped credentials, say), so detection reruns on the rendered text until
/// nothing new turns up. No pattern can match across a placeholder, so every
/// later match maps back to one contiguous piece of the original.
pub fn detect_pii(text: &str) -> Vec<(PiiClass, usize, usize)> {
    let mut spans = detect_once(text);
    loop {
        let (rendered, kept) = render(text, &spans);
        let fresh = detect_once(&rendered);
        if fresh.is_empty() {
            return spans;
        }
        for (class, start, end) in fresh {
            let &(r0, o0, _) = kept
                .iter()
                .find(|(r, _, len)| *r <= start && end <= r + len)
                .expect("matches never straddle a placeholder");
            spans.push((class, o0 + start - r0, o0 + end - r0));
        }
        spans.sort_by_key(|m| m.1);
    }
}

pub fn scrub_detailed(text: &str) -> Scrubbed {
    let spans = detect_pii(text);
    let (out, _) = render(text, &spans);
    let replacements = spans
        .into_iter()
        .map(|(class, start, end)| Replacement {
            class,
            start,
            end,
            original: text[start..end].to_string(),
            placeholder: class.placeholder(),
        })
        .collect();
    Scrubbed { text: out, replacements }
}

/// Replaces every detected PII span and reports the counts per class.
/// The report's `doc_id` is left empty; [`scrub_document`] fills it in.
pub fn scrub_pii(text: &str) -> (String, ScrubReport) {
    let scrubbed = scrub_detailed(text);
    let report = scrubbed.report("");
    (scrubbed.text, report)
}

/// Scrubs a document in place. The doc_id is kept so reports can be joined back.
pub fn scrub_document(doc: &mut Document) -> ScrubReport {
    let scrubbed = scrub_detailed(&doc.text);
    let report = scrubbed.report(&doc.doc_id);
    if !scrubbed.replacements.is_empty() {
        doc.set_text(scrubbed.text);
    }
    report
}

fn residual_risk(text: &str) -> bool {
    text.contains('@') || patterns().digit_run.is_match(text)
}
