//! Streaming WARC 1.0/1.1 reader.
//!
//! Records are read one at a time; memory use is bounded by the largest
//! single record. Gzip input (one member per record, or one member for the
//! whole file) is detected from the magic bytes.

use std::io::{self, BufRead, BufReader, Read};

use chrono::{DateTime, Utc};
use flate2::read::MultiGzDecoder;
use url::Url;

use super::{ArchiveStats, RawRecord};
use crate::{Error, Result};

pub(crate) fn open(mut reader: Box<dyn BufRead>) -> io::Result<Box<dyn BufRead>> {
    let gz = {
        let buf = reader.fill_buf()?;
        buf.len() >= 2 && buf[0] == 0x1f && buf[1] == 0x8b
    };
    Ok(if gz { Box::new(BufReader::new(MultiGzDecoder::new(reader))) } else { reader })
}

pub struct WarcRecords {
    reader: Box<dyn BufRead>,
    crawl_id: Option<String>,
    stats: ArchiveStats,
    /// A version line consumed while resynchronising after a bad record.
    pending_version: Option<String>,
    done: bool,
}

enum Step {
    Record(RawRecord),
    Skip,
    End,
}

impl WarcRecords {
    pub(crate) fn new(reader: Box<dyn BufRead>, crawl_id: Option<String>) -> Self {
        WarcRecords { reader, crawl_id, stats: ArchiveStats::default(), pending_version: None, done: false }
    }

    pub fn stats(&self) -> &ArchiveStats {
        &self.stats
    }

    fn read_line(&mut self) -> io::Result<Option<String>> {
        let mut buf = Vec::new();
        let n = self.reader.read_until(b'\n', &mut buf)?;
        if n == 0 {
            return Ok(None);
        }
        while matches!(buf.last(), Some(b'\n' | b'\r')) {
            buf.pop();
        }
        Ok(Some(String::from_utf8_lossy(&buf).into_owned()))
    }

    /// Skips forward to the next `WARC/1.x` version line.
    fn resync(&mut self) -> io::Result<()> {
        while let Some(line) = self.read_line()? {
            if is_version_line(&line) {
                self.pending_version = Some(line);
                return Ok(());
            }
        }
        Ok(())
    }

    fn step(&mut self) -> Result<Step> {
        let version = match self.pending_version.take() {
            Some(v) => v,
            None => loop {
                match self.read_line()? {
                    None => return Ok(Step::End),
                    Some(l) if l.trim().is_empty() => continue,
                    Some(l) => break l,
                }
            },
        };
        if !is_version_line(&version) {
            self.stats.malformed += 1;
            log::warn!("skipping WARC record with bad version line {version:?}");
            self.resync()?;
            return Ok(Step::Skip);
        }

        let mut headers: Vec<(String, String)> = Vec::new();
        loop {
            let Some(line) = self.read_line()? else {
                return Err(Error::TruncatedArchive { records: self.stats.yielded });
            };
            if line.is_empty() {
                break;
            }
            match line.split_once(':') {
                Some((k, v)) => headers.push((k.trim().to_ascii_lowercase(), v.trim().to_string())),
                None => {
                    self.stats.malformed += 1;
                    log::warn!("skipping WARC record with bad header line {line:?}");
                    self.resync()?;
                    return Ok(Step::Skip);
                }
            }
        }
        let header = |name: &str| headers.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str());

        let Some(length) = header("content-length").and_then(|v| v.parse::<u64>().ok()) else {
            self.stats.malformed += 1;
            log::warn!("skipping WARC record without a valid Content-Length");
            self.resync()?;
            return Ok(Step::Skip);
        };
        let mut block = Vec::new();
        (&mut self.reader).take(length).read_to_end(&mut block)?;
        if (block.len() as u64) < length {
            return Err(Error::TruncatedArchive { records: self.stats.yielded });
        }
        self.stats.peak_record_bytes = self.stats.peak_record_bytes.max(block.len());

        let record_type = header("warc-type").unwrap_or_default().to_ascii_lowercase();
        if record_type == "warcinfo" && self.crawl_id.is_none() {
            self.crawl_id = warcinfo_crawl(&block);
        }
        if record_type != "response" && record_type != "conversion" {
            self.stats.other_types += 1;
            return Ok(Step::Skip);
        }

        let Some(target_url) = header("warc-target-uri")
            .map(|u| u.trim_matches(|c| c == '<' || c == '>').to_string())
            .filter(|u| Url::parse(u).is_ok())
        else {
            self.stats.malformed += 1;
            return Ok(Step::Skip);
        };

        let (content_type, payload) = if record_type == "response" {
            split_http(&block)
        } else {
            (header("content-type").unwrap_or("text/plain").to_string(), block)
        };
        if payload.is_empty() {
            self.stats.empty += 1;
            return Ok(Step::Skip);
        }
        if !is_textual(&content_type) {
            self.stats.non_html += 1;
            return Ok(Step::Skip);
        }

        let fetch_time = header("warc-date")
            .and_then(|d| DateTime::parse_from_rfc3339(d).ok())
            .map(|d| d.with_timezone(&Utc))
            .unwrap_or(DateTime::<Utc>::UNIX_EPOCH);
        Ok(Step::Record(RawRecord {
            record_id: header("warc-record-id").unwrap_or_default().to_string(),
            target_url,
            fetch_time,
            content_type,
            payload,
            crawl_id: self.crawl_id.clone().unwrap_or_default(),
        }))
    }
}

impl Iterator for WarcRecords {
    type Item = Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            match self.step() {
                Ok(Step::Record(r)) => {
                    self.stats.yielded += 1;
                    return Some(Ok(r));
                }
                Ok(Step::Skip) => continue,
                Ok(Step::End) => self.done = true,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        None
    }
}

fn is_version_line(line: &str) -> bool {
    matches!(line.trim_end(), "WARC/1.0" | "WARC/1.1")
}

fn warcinfo_crawl(block: &[u8]) -> Option<String> {
    String::from_utf8_lossy(block)
        .lines()
        .find_map(|l| l.strip_prefix("isPartOf:").map(|v| v.trim().to_string()))
}

/// Splits an HTTP response block into its Content-Type and body.
fn split_http(block: &[u8]) -> (String, Vec<u8>) {
    let (head, body) = match block.windows(4).position(|w| w == b"\r\n\r\n") {
        Some(i) => (&block[..i], &block[i + 4..]),
        None => match block.windows(2).position(|w| w == b"\n\n") {
            Some(i) => (&block[..i], &block[i + 2..]),
            None => (block, &[][..]),
        },
    };
    let head = String::from_utf8_lossy(head);
    let content_type = head
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(':'))
        .find(|(k, _)| k.trim().eq_ignore_ascii_case("content-type"))
        .map(|(_, v)| v.trim().to_string())
        .unwrap_or_else(|| "text/html".to_string());
    (content_type, body.to_vec())
}

fn is_textual(content_type: &str) -> bool {
    let mime = content_type.split(';').next().unwrap_or_default().trim().to_ascii_lowercase();
    matches!(mime.as_str(), "text/html" | "application/xhtml+xml" | "text/plain")
}
