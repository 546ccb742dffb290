//! `cc-curate`: command-line front end.
//!
//! Data goes to stdout (or `-o`), one JSON summary line goes to stderr.

mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cc_curate::curate::{
    apply_thresholds, bucketize, default_edges, sample_representative, score_document, ThresholdConfig, DEFAULT_BUCKETS,
};
use cc_curate::ingest::{c5_languages, ArchiveFormat};
use cc_curate::langid::{bundled_profiles, score_language};
use cc_curate::pipeline::run_archives;
use cc_curate::policy::{build_ledger, prepare, run_policy, DomainLedger, Verdict, DEFAULT_MIN_WORDS};
use cc_curate::postprocess::{
    deduplicate, filter_harmful, pii_audit_sample, scrub_document, HarmfulAction, Wordlist, DEFAULT_AUDIT_SIZE,
};
use cc_curate::registry::{api, example_collection, CollectionRecord, Registry, RiskLevel, RiskWeights};
use cc_curate::synth::{clean_transcript, default_blocklist, parse_blocklist, read_triples, verbalize_all, TemplateSet};

#[derive(Parser)]
#[command(name = "cc-curate", version, about = "License-aware corpus curation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InOut {
    /// Input file, `-` for stdin
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file, `-` for stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl InOut {
    fn input(&self) -> Option<&Path> {
        self.input.as_deref()
    }

    fn output(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Read WARC or JSONL archives into scored, language-filtered documents
    Ingest {
        /// Archive files; `.jsonl` is read as JSONL, anything else as WARC (optionally gzipped)
        #[arg(required = true)]
        archives: Vec<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, default_value = "web")]
        collection: String,
        /// Comma-separated language codes to keep
        #[arg(long, value_delimiter = ',')]
        languages: Option<Vec<String>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write per-language counts here as JSON
        #[arg(long)]
        counts: Option<PathBuf>,
    },
    /// Score each input line against the bundled language profiles
    Langid {
        #[command(flatten)]
        io: InOut,
    },
    #[command(subcommand)]
    Curate(CurateCmd),
    #[command(subcommand)]
    Policy(PolicyCmd),
    #[command(subcommand)]
    Post(PostCmd),
    #[command(subcommand)]
    Synth(SynthCmd),
    Registry {
        /// Registry directory
        #[arg(long, default_value = "registry")]
        root: PathBuf,
        #[command(subcommand)]
        command: RegistryCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Warc,
    Jsonl,
}

#[derive(Subcommand)]
enum CurateCmd {
    /// Normalize and add language and quality scores
    Score {
        #[command(flatten)]
        io: InOut,
    },
    /// Keep documents passing a threshold config
    Apply {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        io: InOut,
        /// Write dropped documents here
        #[arg(long)]
        dropped: Option<PathBuf>,
    },
    /// Uniform reproducible sample
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: InOut,
    },
    /// Bucket a scored sample on one dimension
    Buckets {
        #[arg(long)]
        dimension: String,
        /// Comma-separated ascending edges; ten equal-width buckets when absent
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<f64>>,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Subcommand)]
enum PolicyCmd {
    /// Per-domain license ledger over all input documents
    Ledger {
        #[command(flatten)]
        io: InOut,
    },
    /// Verification queue after the domain and position filters
    Queue {
        #[arg(long, default_value_t = DEFAULT_MIN_WORDS)]
        min_words: u64,
        #[command(flatten)]
        io: InOut,
        /// Write the ledger of surviving domains here (input to `registry import-ledger`)
        #[arg(long)]
        ledger_out: Option<PathBuf>,
    },
    /// Keep documents on domains a reviewer approved
    Apply {
        #[arg(long)]
        allowlist: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_WORDS)]
        min_words: u64,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Subcommand)]
enum PostCmd {
    /// Replace personal data with placeholders
    Scrub {
        #[command(flatten)]
        io: InOut,
        /// Per-document scrub reports as JSONL
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Drop or flag documents matching a wordlist
    Harmful {
        #[arg(long)]
        wordlist: PathBuf,
        #[arg(long, value_enum, default_value = "drop")]
        action: Action,
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exact and near-duplicate removal within one collection
    Dedup {
        #[arg(long)]
        collection: String,
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample unscrubbed documents and record every scrub edit
    Audit {
        #[arg(long, default_value_t = DEFAULT_AUDIT_SIZE)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: InOut,
        /// Also write a Markdown rendering for reviewers
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Drop,
    Flag,
}

#[derive(Subcommand)]
enum SynthCmd {
    /// Turn knowledge-graph triples (TSV) into sentences (JSONL)
    Verbalize {
        /// Template JSON; the bundled templates when absent
        #[arg(long)]
        templates: Option<PathBuf>,
        /// Predicate blocklist; the bundled list when absent
        #[arg(long)]
        blocklist: Option<PathBuf>,
        #[arg(long, default_value = "nld")]
        language: String,
        #[command(flatten)]
        io: InOut,
    },
    /// Strip timestamps and sound markers from transcripts
    CleanTranscripts {
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Subcommand)]
enum RegistryCmd {
    /// Register a collection from a JSON record
    Add {
        /// Record JSON file, `-` for stdin
        #[arg(long, conflicts_with = "example")]
        record: Option<PathBuf>,
        /// Register the bundled example collection
        #[arg(long)]
        example: bool,
    },
    /// Store a new version of a collection record
    Update {
        #[arg(long)]
        record: PathBuf,
    },
    /// List the latest version of every collection
    List {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Assign a risk level, or reject the collection
    Risk {
        #[arg(long)]
        collection: String,
        /// low, medium, high or rejected
        #[arg(long)]
        level: String,
        #[arg(long, default_value = "")]
        rationale: String,
    },
    /// Replace the risk to sampling-weight map
    Weights {
        #[arg(long)]
        low: f64,
        #[arg(long)]
        medium: f64,
        #[arg(long)]
        high: f64,
    },
    /// Load a domain ledger for verification
    ImportLedger {
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_WORDS)]
        min_words: u64,
    },
    /// Save the scored sample that bucket reports are computed from
    StoreSample {
        #[arg(long)]
        collection: String,
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// Export the allowlist as JSONL
    Allowlist {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Serve the review API
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Bearer token required on mutations; also read from CC_CURATE_TOKEN
        #[arg(long, env = "CC_CURATE_TOKEN")]
        token: Option<String>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Ingest { archives, format, collection, languages, output, counts } => {
            ingest(&archives, format, &collection, languages, output.as_deref(), counts.as_deref())
        }
        Command::Langid { io } => langid(&io),
        Command::Curate(cmd) => curate(cmd),
        Command::Policy(cmd) => policy(cmd),
        Command::Post(cmd) => post(cmd),
        Command::Synth(cmd) => synth(cmd),
        Command::Registry { root, command } => registry(&root, command),
    }
}

fn ingest(
    archives: &[PathBuf],
    format: Option<Format>,
    collection: &str,
    languages: Option<Vec<String>>,
    output: Option<&Path>,
    counts_path: Option<&Path>,
) -> Result<()> {
    let languages: BTreeSet<String> = languages.map_or_else(c5_languages, |l| l.into_iter().collect());
    let streams = archives
        .iter()
        .map(|p| {
            let fmt = match format {
                Some(Format::Jsonl) => ArchiveFormat::Jsonl,
                Some(Format::Warc) => ArchiveFormat::Warc,
                None if p.extension().is_some_and(|e| e == "jsonl") => ArchiveFormat::Jsonl,
                None => ArchiveFormat::Warc,
            };
            Ok((File::open(p).with_context(|| format!("opening {}", p.display()))?, fmt))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = io::writer(output)?;
    let counts = run_archives(streams, collection, bundled_profiles(), &languages, |doc| {
        cc_curate::ingest::write_documents(&mut out, [&doc])
    })?;
    out.flush()?;
    if let Some(path) = counts_path {
        io::save_json(Some(path), &counts)?;
    }
    io::report(&counts)
}

fn langid(io: &InOut) -> Result<()> {
    let text = io::read_text(io.input())?;
    let mut out = io::writer(io.output())?;
    let profiles = bundled_profiles();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        serde_json::to_writer(&mut out, &score_language(line, profiles))?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn curate(cmd: CurateCmd) -> Result<()> {
    match cmd {
        CurateCmd::Score { io } => {
            let mut docs = io::load_docs(io.input())?;
            let profiles = bundled_profiles();
            for d in &mut docs {
                score_document(d, profiles);
            }
            io::save_docs(io.output(), &docs)?;
            io::report(&json!({ "scored": docs.len() }))
        }
        CurateCmd::Apply { config, io, dropped } => {
            let cfg = ThresholdConfig::load(&config)?;
            let docs = io::load_docs(io.input())?;
            let mut kept = Vec::new();
            let mut rejected = Vec::new();
            let mut failed: BTreeMap<String, usize> = BTreeMap::new();
            for d in &docs {
                let verdict = apply_thresholds(d, &cfg)?;
                for dim in &verdict.failed_dimensions {
                    *failed.entry(dim.clone()).or_default() += 1;
                }
                if verdict.kept {
                    kept.push(d);
                } else {
                    rejected.push(d);
                }
            }
            io::save_docs(io.output(), kept.iter().copied())?;
            if let Some(path) = dropped {
                io::save_docs(Some(&path), rejected.iter().copied())?;
            }
            io::report(&json!({
                "collection_id": cfg.collection_id,
                "version": cfg.version,
                "kept": kept.len(),
                "dropped": rejected.len(),
                "failed_dimensions": failed,
            }))
        }
        CurateCmd::Sample { n, seed, io } => {
            let docs = io::load_docs(io.input())?;
            let sample = sample_representative(docs.iter(), n, seed);
            io::save_docs(io.output(), sample.iter().copied())?;
            io::report(&json!({ "population": docs.len(), "sampled": sample.len(), "seed": seed }))
        }
        CurateCmd::Buckets { dimension, edges, io } => {
            let docs = io::load_docs(io.input())?;
            let edges = match edges {
                Some(e) => e,
                None => default_edges(&docs, &dimension, DEFAULT_BUCKETS)?,
            };
            let report = bucketize(&docs, &dimension, &edges)?;
            io::save_json(io.output(), &report)
        }
    }
}

fn policy(cmd: PolicyCmd) -> Result<()> {
    match cmd {
        PolicyCmd::Ledger { io } => {
            let docs = io::load_docs(io.input())?;
            let ledger = build_ledger(&docs);
            io::save_json(io.output(), &ledger)?;
            io::report(&json!({ "documents": docs.len(), "domains": ledger.len() }))
        }
        PolicyCmd::Queue { min_words, io, ledger_out } => {
            let docs = io::load_docs(io.input())?;
            let (survivors, ledger, queue) = prepare(&docs, min_words);
            io::save_json(io.output(), &queue)?;
            if let Some(path) = ledger_out {
                io::save_json(Some(&path), &ledger)?;
            }
            io::report(&json!({
                "documents": docs.len(),
                "survivors": survivors.len(),
                "domains": ledger.len(),
                "queued": queue.items.len(),
            }))
        }
        PolicyCmd::Apply { allowlist, min_words, io } => {
            let verdicts = Verdict::read_jsonl(&std::fs::read_to_string(&allowlist)?)?;
            let docs = io::load_docs(io.input())?;
            let outcome = run_policy(&docs, &verdicts, min_words);
            io::save_docs(io.output(), outcome.kept.iter().copied())?;
            let domains: BTreeSet<&str> = outcome.kept.iter().map(|d| d.domain.as_str()).collect();
            io::report(&json!({ "documents": docs.len(), "kept": outcome.kept.len(), "domains": domains }))
        }
    }
}

fn post(cmd: PostCmd) -> Result<()> {
    match cmd {
        PostCmd::Scrub { io, report } => {
            let mut docs = io::load_docs(io.input())?;
            let reports: Vec<_> = docs.iter_mut().map(scrub_document).collect();
            io::save_docs(io.output(), &docs)?;
            if let Some(path) = report {
                io::save_jsonl(&path, &reports)?;
            }
            let replaced: usize = reports.iter().map(|r| r.replacements.len()).sum();
            let residual = reports.iter().filter(|r| r.residual_risk_flag).count();
            io::report(&json!({ "documents": docs.len(), "replacements": replaced, "residual_risk_docs": residual }))
        }
        PostCmd::Harmful { wordlist, action, io, report } => {
            let list = Wordlist::from_tsv(std::io::BufReader::new(File::open(&wordlist)?))?;
            let docs = io::load_docs(io.input())?;
            let n = docs.len();
            let action = match action {
                Action::Drop => HarmfulAction::Drop,
                Action::Flag => HarmfulAction::Flag,
            };
            let (kept, flags) = filter_harmful(docs, &list, action);
            io::save_docs(io.output(), &kept)?;
            if let Some(path) = report {
                io::save_jsonl(&path, &flags)?;
            }
            io::report(&json!({ "documents": n, "kept": kept.len(), "flagged": flags.len() }))
        }
        PostCmd::Dedup { collection, io, report } => {
            let docs = io::load_docs(io.input())?;
            let (kept, rep) = deduplicate(docs, &collection)?;
            io::save_docs(io.output(), &kept)?;
            if let Some(path) = report {
                io::save_jsonl(&path, &rep.dropped)?;
            }
            io::report(&json!({ "scope": rep.scope, "input": rep.input_count, "kept": rep.kept_count }))
        }
        PostCmd::Audit { n, seed, io, markdown } => {
            let docs = io::load_docs(io.input())?;
            let bundle = pii_audit_sample(&docs, n, seed);
            io::save_json(io.output(), &bundle)?;
            if let Some(path) = markdown {
                std::fs::write(&path, bundle.to_markdown())?;
            }
            let edits: usize = bundle.entries.iter().map(|e| e.edits.len()).sum();
            io::report(&json!({ "population": bundle.population, "entries": bundle.entries.len(), "edits": edits }))
        }
    }
}

fn synth(cmd: SynthCmd) -> Result<()> {
    match cmd {
        SynthCmd::Verbalize { templates, blocklist, language, io } => {
            let templates = match templates {
                Some(p) => TemplateSet::from_json(&std::fs::read_to_string(&p)?, &language)?,
                None => TemplateSet::bundled(&language),
            };
            if templates.is_empty() {
                bail!("no templates for language `{language}`");
            }
            let blocklist = match blocklist {
                Some(p) => parse_blocklist(&std::fs::read_to_string(&p)?),
                None => default_blocklist(),
            };
            let triples = read_triples(io::reader(io.input())?)?;
            let (sentences, stats) = verbalize_all(&triples, &templates, &blocklist);
            let mut out = io::writer(io.output())?;
            for s in &sentences {
                serde_json::to_writer(&mut out, s)?;
                writeln!(out)?;
            }
            out.flush()?;
            io::report(&stats)
        }
        SynthCmd::CleanTranscripts { io } => {
            let text = io::read_text(io.input())?;
            let mut out = io::writer(io.output())?;
            let cleaned = clean_transcript(&text);
            out.write_all(cleaned.as_bytes())?;
            if !cleaned.is_empty() {
                writeln!(out)?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn read_record(path: &Path) -> Result<CollectionRecord> {
    Ok(serde_json::from_str(&io::read_text(Some(path))?).context("parsing collection record")?)
}

fn registry(root: &Path, cmd: RegistryCmd) -> Result<()> {
    let mut reg = Registry::open(root)?;
    match cmd {
        RegistryCmd::Add { record, example } => {
            let record = match (record, example) {
                (_, true) => example_collection(),
                (Some(path), false) => read_record(&path)?,
                (None, false) => bail!("give --record FILE or --example"),
            };
            let stored = reg.register_collection(record)?;
            io::report(&json!({ "registered": stored.collection_id, "version": stored.version }))
        }
        RegistryCmd::Update { record } => {
            let stored = reg.update_collection(read_record(&record)?)?;
            io::report(&json!({ "updated": stored.collection_id, "version": stored.version }))
        }
        RegistryCmd::List { output } => {
            let mut w = io::writer(output.as_deref())?;
            writeln!(w, "{}", reg.export_collections())?;
            w.flush()?;
            Ok(())
        }
        RegistryCmd::Risk { collection, level, rationale } => {
            let record = if level == "rejected" {
                reg.reject_collection(&collection, &rationale)?
            } else {
                reg.assign_risk(&collection, level.parse::<RiskLevel>()?, &rationale)?
            };
            io::report(&record)
        }
        RegistryCmd::Weights { low, medium, high } => {
            reg.set_risk_weights(RiskWeights { low, medium, high })?;
            io::report(&json!({ "low": low, "medium": medium, "high": high }))
        }
        RegistryCmd::ImportLedger { ledger, min_words } => {
            let ledger: DomainLedger = serde_json::from_str(&std::fs::read_to_string(&ledger)?)?;
            let n = ledger.len();
            reg.import_ledger(ledger, min_words)?;
            io::report(&json!({ "domains": n, "queued": reg.queue().items.len() }))
        }
        RegistryCmd::StoreSample { collection, input } => {
            let docs = io::load_docs(input.as_deref())?;
            let info = reg.store_sample(&collection, &docs)?;
            io::report(&info)
        }
        RegistryCmd::Allowlist { output } => {
            let mut w = io::writer(output.as_deref())?;
            w.write_all(reg.export_allowlist().as_bytes())?;
            w.flush()?;
            Ok(())
        }
        RegistryCmd::Serve { port, host, token } => serve(reg, &host, port, token),
    }
}

fn serve(reg: Registry, host: &str, port: u16, token: Option<String>) -> Result<()> {
    let app = api::router(Arc::new(Mutex::new(reg)), token);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok(())
    })
}
