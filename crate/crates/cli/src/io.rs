use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cc_curate::ingest::{read_documents, write_documents};
use cc_curate::Document;
use serde::Serialize;

/// `-` or no path means stdin.
pub fn reader(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) => Ok(Box::new(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?))),
    }
}

/// `-` or no path means stdout.
pub fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))),
    }
}

pub fn read_text(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    reader(path)?.read_to_string(&mut s)?;
    Ok(s)
}

pub fn load_docs(path: Option<&Path>) -> Result<Vec<Document>> {
    Ok(read_documents(reader(path)?).collect::<cc_curate::Result<Vec<_>>>()?)
}

pub fn save_docs<'a>(path: Option<&Path>, docs: impl IntoIterator<Item = &'a Document>) -> Result<()> {
    let mut w = writer(path)?;
    write_documents(&mut w, docs)?;
    w.flush()?;
    Ok(())
}

pub fn save_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn save_jsonl<T: Serialize>(path: &PathBuf, items: &[T]) -> Result<()> {
    let mut w = writer(Some(path))?;
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// One-line JSON summary on stderr, so stdout stays a clean data stream.
pub fn report<T: Serialize>(value: &T) -> Result<()> {
    eprintln!("{}", serde_json::to_string(value)?);
    Ok(())
}
