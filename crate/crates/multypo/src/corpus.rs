//! Corpus front end: newline-delimited document streams, per-document seed
//! derivation, event logs, and the run report.
//!
//! Documents are processed in bounded batches, so memory use scales with the
//! batch, not the corpus. Each document gets its own seed mixed from the run
//! seed and its id, which makes outputs identical regardless of worker-pool
//! size or scheduling.

use crate::engine::{corrupt, CorruptionConfig, TypoEvent};
use crate::error::{Error, Result};
use crate::lexicon::IgnoreSet;
use crate::registry::LayoutRegistry;
use crate::sampling::TypoOp;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

/// How input lines map to documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFormat {
    /// One document per line, the whole line is the text.
    Plain,
    /// One JSON object per line; only the named field is corrupted, all
    /// other attributes pass through untouched.
    Records { field: String },
}

/// One input document.
#[derive(Debug, Clone)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub text: String,
    /// Full parsed object for records input, None for plain lines.
    pub raw: Option<serde_json::Value>,
}

/// Parse one input line into a document. Line numbers are 1-based and used
/// as the doc id when the record carries no string `id` attribute.
pub fn read_document(line: &str, line_no: usize, format: &InputFormat) -> Result<DocumentRecord> {
    match format {
        InputFormat::Plain => Ok(DocumentRecord {
            doc_id: line_no.to_string(),
            text: line.to_string(),
            raw: None,
        }),
        InputFormat::Records { field } => {
            let value: serde_json::Value =
                serde_json::from_str(line).map_err(|e| Error::BadRecord {
                    line: line_no,
                    detail: e.to_string(),
                })?;
            let obj = value.as_object().ok_or_else(|| Error::BadRecord {
                line: line_no,
                detail: "not a JSON object".to_string(),
            })?;
            let text = match obj.get(field) {
                None => {
                    return Err(Error::MissingField {
                        line: line_no,
                        field: field.clone(),
                    })
                }
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(_) => {
                    return Err(Error::NonStringField {
                        line: line_no,
                        field: field.clone(),
                    })
                }
            };
            let doc_id = match obj.get("id") {
                Some(serde_json::Value::String(s)) => s.clone(),
                _ => line_no.to_string(),
            };
            Ok(DocumentRecord {
                doc_id,
                text,
                raw: Some(value),
            })
        }
    }
}

/// Mix the run seed with a document id into that document's stream seed.
/// FNV-1a over the bytes, then a splitmix64 finalizer. Stable across
/// platforms and processing order.
pub fn derive_doc_seed(run_seed: u64, doc_id: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf29ce484222325;
    const FNV_PRIME: u64 = 0x100000001b3;
    let mut h = FNV_OFFSET;
    for b in run_seed.to_le_bytes() {
        h = (h ^ b as u64).wrapping_mul(FNV_PRIME);
    }
    for b in doc_id.as_bytes() {
        h = (h ^ *b as u64).wrapping_mul(FNV_PRIME);
    }
    // splitmix64 finalizer
    let mut z = h.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// One event-log line: everything needed to re-derive a single document.
#[derive(Debug, Serialize)]
pub struct EventLogRecord<'a> {
    pub doc_id: &'a str,
    pub language: &'a str,
    pub rate: f64,
    pub seed: u64,
    pub events: &'a [TypoEvent],
}

/// Aggregate statistics for a corruption run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub language: String,
    pub rate: f64,
    pub seed: u64,
    pub mode: String,
    pub documents: u64,
    pub requested_typos: u64,
    pub applied_typos: u64,
    pub shortfall_documents: u64,
    pub op_histogram: BTreeMap<String, u64>,
}

impl RunReport {
    fn new(config: &CorruptionConfig) -> Self {
        let mut op_histogram = BTreeMap::new();
        for op in TypoOp::ALL {
            op_histogram.insert(op.name().to_string(), 0);
        }
        RunReport {
            language: config.language.code().to_string(),
            rate: config.rate,
            seed: config.seed,
            mode: match config.mode {
                crate::engine::Mode::MulTypo => "multypo".to_string(),
                crate::engine::Mode::Naive => "naive".to_string(),
            },
            documents: 0,
            requested_typos: 0,
            applied_typos: 0,
            shortfall_documents: 0,
            op_histogram,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "language={} rate={} seed={} mode={}\n",
            self.language, self.rate, self.seed, self.mode
        ));
        out.push_str(&format!(
            "documents={} requested_typos={} applied_typos={} shortfall_documents={}\n",
            self.documents, self.requested_typos, self.applied_typos, self.shortfall_documents
        ));
        for (op, count) in &self.op_histogram {
            out.push_str(&format!("op.{op}={count}\n"));
        }
        out
    }
}

struct LineOutcome {
    out_line: String,
    event_line: String,
    requested: usize,
    applied: usize,
    shortfall: usize,
    op_counts: [u64; 4],
}

/// Corrupt a newline-delimited corpus. `config.seed` is the run seed; each
/// document derives its own. Output order matches input order.
pub fn process_corpus<R: BufRead, W: Write, E: Write>(
    reader: R,
    mut output: W,
    mut events_out: Option<E>,
    format: &InputFormat,
    config: &CorruptionConfig,
    registry: &LayoutRegistry,
    ignore: &IgnoreSet,
    workers: usize,
) -> Result<RunReport> {
    let workers = workers.max(1);
    let batch_size = (workers * 64).max(256);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");

    let mut report = RunReport::new(config);
    let mut lines = reader.lines().enumerate();
    loop {
        let mut batch = Vec::with_capacity(batch_size);
        for (idx, line) in lines.by_ref() {
            let line = line.map_err(|e| Error::io("<input>", e))?;
            batch.push((idx + 1, line));
            if batch.len() == batch_size {
                break;
            }
        }
        if batch.is_empty() {
            break;
        }
        let outcomes: Vec<Result<LineOutcome>> = pool.install(|| {
            batch
                .par_iter()
                .map(|(line_no, line)| {
                    process_line(line, *line_no, format, config, registry, ignore)
                })
                .collect()
        });
        for outcome in outcomes {
            let outcome = outcome?;
            writeln!(output, "{}", outcome.out_line).map_err(|e| Error::io("<output>", e))?;
            if let Some(w) = events_out.as_mut() {
                writeln!(w, "{}", outcome.event_line).map_err(|e| Error::io("<events>", e))?;
            }
            report.documents += 1;
            report.requested_typos += outcome.requested as u64;
            report.applied_typos += outcome.applied as u64;
            if outcome.shortfall > 0 {
                report.shortfall_documents += 1;
            }
            for (op, count) in TypoOp::ALL.iter().zip(outcome.op_counts) {
                *report.op_histogram.get_mut(op.name()).unwrap() += count;
            }
        }
    }
    output.flush().map_err(|e| Error::io("<output>", e))?;
    if let Some(w) = events_out.as_mut() {
        w.flush().map_err(|e| Error::io("<events>", e))?;
    }
    Ok(report)
}

fn process_line(
    line: &str,
    line_no: usize,
    format: &InputFormat,
    config: &CorruptionConfig,
    registry: &LayoutRegistry,
    ignore: &IgnoreSet,
) -> Result<LineOutcome> {
    let record = read_document(line, line_no, format)?;
    let doc_seed = derive_doc_seed(config.seed, &record.doc_id);
    let doc_config = CorruptionConfig {
        seed: doc_seed,
        ..*config
    };
    let result = corrupt(&record.text, &doc_config, registry, ignore)?;

    let out_line = match record.raw {
        None => result.text.clone(),
        Some(mut value) => {
            if let (InputFormat::Records { field }, Some(obj)) =
                (format, value.as_object_mut())
            {
                obj.insert(
                    field.clone(),
                    serde_json::Value::String(result.text.clone()),
                );
            }
            serde_json::to_string(&value).expect("round-tripped JSON serializes")
        }
    };

    let event_line = serde_json::to_string(&EventLogRecord {
        doc_id: &record.doc_id,
        language: config.language.code(),
        rate: config.rate,
        seed: doc_seed,
        events: &result.events,
    })
    .expect("event log serializes");

    let mut op_counts = [0u64; 4];
    for ev in &result.events {
        let i = TypoOp::ALL.iter().position(|&o| o == ev.op).unwrap();
        op_counts[i] += 1;
    }
    Ok(LineOutcome {
        out_line,
        event_line,
        requested: result.requested,
        applied: result.applied,
        shortfall: result.shortfall,
        op_counts,
    })
}
