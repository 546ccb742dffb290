//! Record readers and the first normalisation steps for incoming documents.

mod text;
mod warc;

use std::collections::BTreeSet;
use std::io::{self, BufRead, BufReader, Read, Write};

use chrono::{DateTime, Utc};
use serde::Deserialize;
use url::Url;

use crate::license;
use crate::{Document, Error, Result};

pub use text::extract_text;
pub use warc::WarcRecords;

/// Languages retained when building the web collection (ISO 639-3).
pub const C5_LANGUAGES: [&str; 8] = ["afr", "deu", "eng", "fra", "fry", "ita", "nld", "spa"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub record_id: String,
    pub target_url: String,
    pub fetch_time: DateTime<Utc>,
    pub content_type: String,
    pub payload: Vec<u8>,
    pub crawl_id: String,
}

impl RawRecord {
    /// `charset=` parameter of the content type, if any.
    pub fn charset(&self) -> Option<&str> {
        self.content_type.split(';').skip(1).find_map(|p| {
            let (k, v) = p.split_once('=')?;
            k.trim().eq_ignore_ascii_case("charset").then(|| v.trim().trim_matches('"'))
        })
    }

    pub fn is_html(&self) -> bool {
        let mime = self.content_type.split(';').next().unwrap_or_default().trim();
        mime.eq_ignore_ascii_case("text/html") || mime.eq_ignore_ascii_case("application/xhtml+xml")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArchiveFormat {
    Warc,
    Jsonl,
}

/// Counters for records that were read but not yielded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchiveStats {
    pub yielded: usize,
    pub malformed: usize,
    pub non_html: usize,
    pub other_types: usize,
    pub empty: usize,
    /// Largest record block held in memory at once.
    pub peak_record_bytes: usize,
}

pub enum Archive {
    Warc(WarcRecords),
    Jsonl(JsonlRecords),
}

impl Archive {
    pub fn stats(&self) -> &ArchiveStats {
        match self {
            Archive::Warc(w) => w.stats(),
            Archive::Jsonl(j) => &j.stats,
        }
    }
}

impl Iterator for Archive {
    type Item = Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            Archive::Warc(w) => w.next(),
            Archive::Jsonl(j) => j.next(),
        }
    }
}

/// Streams records from a WARC or JSONL source.
///
/// Only response/conversion records with a non-empty HTML or plain-text
/// payload are yielded; everything else is counted in [`Archive::stats`].
pub fn read_archive<R: Read + 'static>(stream: R, format: ArchiveFormat) -> Result<Archive> {
    read_archive_with_crawl(stream, format, None)
}

pub fn read_archive_with_crawl<R: Read + 'static>(
    stream: R,
    format: ArchiveFormat,
    crawl_id: Option<String>,
) -> Result<Archive> {
    let reader: Box<dyn BufRead> = Box::new(BufReader::new(stream));
    Ok(match format {
        ArchiveFormat::Warc => Archive::Warc(WarcRecords::new(warc::open(reader)?, crawl_id)),
        ArchiveFormat::Jsonl => Archive::Jsonl(JsonlRecords {
            lines: reader.lines(),
            crawl_id,
            stats: ArchiveStats::default(),
        }),
    })
}

/// Line-delimited raw records: `{"url", "html" | "text", "record_id"?, "fetch_time"?, "content_type"?, "crawl_id"?}`.
pub struct JsonlRecords {
    lines: io::Lines<Box<dyn BufRead>>,
    crawl_id: Option<String>,
    stats: ArchiveStats,
}

#[derive(Deserialize)]
struct JsonlRecord {
    url: String,
    #[serde(default)]
    record_id: Option<String>,
    #[serde(default)]
    fetch_time: Option<DateTime<Utc>>,
    #[serde(default)]
    content_type: Option<String>,
    #[serde(default)]
    html: Option<String>,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    crawl_id: Option<String>,
}

impl Iterator for JsonlRecords {
    type Item = Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            if line.trim().is_empty() {
                continue;
            }
            let Ok(rec) = serde_json::from_str::<JsonlRecord>(&line) else {
                self.stats.malformed += 1;
                continue;
            };
            if Url::parse(&rec.url).is_err() {
                self.stats.malformed += 1;
                continue;
            }
            let (default_type, payload) = match (rec.html, rec.text) {
                (Some(h), _) => ("text/html", h),
                (None, Some(t)) => ("text/plain", t),
                (None, None) => ("text/plain", String::new()),
            };
            if payload.is_empty() {
                self.stats.empty += 1;
                continue;
            }
            self.stats.yielded += 1;
            return Some(Ok(RawRecord {
                record_id: rec.record_id.unwrap_or_default(),
                target_url: rec.url,
                fetch_time: rec.fetch_time.unwrap_or(DateTime::<Utc>::UNIX_EPOCH),
                content_type: rec.content_type.unwrap_or_else(|| default_type.to_string()),
                payload: payload.into_bytes(),
                crawl_id: rec.crawl_id.or_else(|| self.crawl_id.clone()).unwrap_or_default(),
            }));
        }
    }
}

/// Turns a raw record into a document: markup is parsed once and used both
/// for visible text and for license extraction.
pub fn record_to_document(record: &RawRecord, collection_id: &str) -> Document {
    if record.is_html() {
        let tree = license::parse_markup(&record.payload, record.charset());
        let text = extract_text(&tree);
        let mut doc = Document::new(collection_id, &record.target_url, text);
        doc.license = Some(license::annotate_tree(&tree, Some(&record.target_url)));
        doc
    } else {
        let text = String::from_utf8_lossy(&record.payload).into_owned();
        Document::new(collection_id, &record.target_url, text)
    }
}

/// True iff the document's top-scoring language is in `retained`.
pub fn retain_language(doc: &Document, retained: &BTreeSet<String>) -> Result<bool> {
    if retained.is_empty() {
        return Err(Error::config("retained language set is empty"));
    }
    let scores = doc
        .language_scores
        .as_ref()
        .ok_or_else(|| Error::config(format!("document {} has no language scores", doc.doc_id)))?;
    Ok(retained.contains(&scores.top))
}

pub fn c5_languages() -> BTreeSet<String> {
    C5_LANGUAGES.iter().map(|s| s.to_string()).collect()
}

/// Reads a `Document` JSONL stream. Errors carry the 1-based line number.
pub fn read_documents<R: BufRead>(reader: R) -> impl Iterator<Item = Result<Document>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some(Document::from_json_line(&l).map_err(|e| Error::InvalidDocument {
            line: i + 1,
            reason: e.to_string(),
        })),
    })
}

pub fn write_documents<'a, W: Write>(mut writer: W, docs: impl IntoIterator<Item = &'a Document>) -> Result<()> {
    for doc in docs {
        writer.write_all(doc.to_json_line().as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langid::LanguageScores;
    use std::io::Cursor;

    fn collect(bytes: Vec<u8>, format: ArchiveFormat) -> (Vec<RawRecord>, ArchiveStats) {
        let mut archive = read_archive(Cursor::new(bytes), format).unwrap();
        let recs = archive.by_ref().collect::<Result<Vec<_>>>().unwrap();
        (recs, archive.stats().clone())
    }

    #[test]
    fn empty_stream_yields_nothing() {
        assert!(collect(Vec::new(), ArchiveFormat::Warc).0.is_empty());
        assert!(collect(Vec::new(), ArchiveFormat::Jsonl).0.is_empty());
    }

    #[test]
    fn jsonl_passthrough_in_order() {
        let src = r#"{"url":"https://a.nl/1","html":"<p>one</p>"}
{"url":"https://a.nl/2","text":"two","crawl_id":"CC-MAIN-2024-10"}
{"url":"https://a.nl/3","html":"<p>three</p>","record_id":"r3"}
"#;
        let (recs, stats) = collect(src.as_bytes().to_vec(), ArchiveFormat::Jsonl);
        let urls: Vec<_> = recs.iter().map(|r| r.target_url.as_str()).collect();
        assert_eq!(urls, ["https://a.nl/1", "https://a.nl/2", "https://a.nl/3"]);
        assert_eq!(recs[1].content_type, "text/plain");
        assert_eq!(recs[1].crawl_id, "CC-MAIN-2024-10");
        assert_eq!(stats.malformed, 0);
    }

    #[test]
    fn jsonl_bad_lines_are_counted() {
        let src = "{\"url\":\"https://a.nl/1\",\"html\":\"x\"}\n{oops\n{\"url\":\"relative\",\"html\":\"x\"}\n";
        let (recs, stats) = collect(src.as_bytes().to_vec(), ArchiveFormat::Jsonl);
        assert_eq!(recs.len(), 1);
        assert_eq!(stats.malformed, 2);
    }

    #[test]
    fn charset_parameter() {
        let rec = RawRecord {
            record_id: String::new(),
            target_url: "https://a.nl/".into(),
            fetch_time: DateTime::<Utc>::UNIX_EPOCH,
            content_type: "text/html; charset=\"ISO-8859-1\"".into(),
            payload: b"x".to_vec(),
            crawl_id: String::new(),
        };
        assert_eq!(rec.charset(), Some("ISO-8859-1"));
        assert!(rec.is_html());
    }

    fn doc_with_top(top: &str) -> Document {
        let mut doc = Document::new("c", "https://a.nl/", "x");
        doc.language_scores = Some(LanguageScores::from_pairs([(top.to_string(), 0.9), ("zzz".to_string(), 0.1)]));
        doc
    }

    #[test]
    fn retain_language_cases() {
        let c5 = c5_languages();
        assert!(retain_language(&doc_with_top("nld"), &c5).unwrap());
        assert!(!retain_language(&doc_with_top("jpn"), &c5).unwrap());
        assert!(matches!(retain_language(&doc_with_top("nld"), &BTreeSet::new()), Err(Error::Config(_))));
    }

    #[test]
    fn documents_round_trip_through_jsonl() {
        let docs = vec![Document::new("c", "https://a.nl/x", "hallo wereld"), Document::new("c", "https://b.nl/", "")];
        let mut buf = Vec::new();
        write_documents(&mut buf, &docs).unwrap();
        let back = read_documents(Cursor::new(buf)).collect::<Result<Vec<_>>>().unwrap();
        assert_eq!(back, docs);
        let err = read_documents(Cursor::new("\n{bad}\n")).next().unwrap().unwrap_err();
        assert!(matches!(err, Error::InvalidDocument { line: 2, .. }));
    }
}
