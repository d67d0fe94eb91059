//! Command-line front end: corrupt corpora and validate the sampler
//! distributions.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (including failed
//! validation checks), 3 I/O error.

use clap::{Args, Parser, Subcommand};
use multypo::corpus::{process_corpus, InputFormat};
use multypo::engine::{CorruptionConfig, Mode, DEFAULT_MAX_RETRIES};
use multypo::error::Error;
use multypo::validate::{
    builtin_ignore_sets, validate_constraints, validate_operation_mix,
    validate_position_distribution, validate_word_length_bias, ValidationReport,
};
use multypo::{IgnoreSet, LanguageId, LayoutRegistry};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "multypo", version, about = "Keyboard-aware multilingual typo injection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corrupt a newline-delimited corpus.
    Corrupt(CorruptArgs),
    /// Check sampler distributions and layout constraints empirically.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct CorruptArgs {
    /// Language id, e.g. eng_Latn.
    #[arg(long, env = "MULTYPO_LANG")]
    lang: LanguageId,
    /// Typo rate in [0, 1]. Common benchmark levels: 0.0, 0.1, 0.4, 0.7.
    #[arg(long, env = "MULTYPO_RATE")]
    rate: f64,
    /// Run seed; each document derives its own from this and its id.
    #[arg(long, env = "MULTYPO_SEED", default_value_t = 0)]
    seed: u64,
    /// multypo (keyboard-constrained) or naive (unconstrained baseline).
    #[arg(long, env = "MULTYPO_MODE", default_value = "multypo")]
    mode: Mode,
    /// plain: one document per line. records: one JSON object per line.
    #[arg(long, env = "MULTYPO_FORMAT", default_value = "plain")]
    format: String,
    /// For records input, the field to corrupt.
    #[arg(long, env = "MULTYPO_FIELD")]
    field: Option<String>,
    /// Input path, or - for stdin.
    #[arg(long, env = "MULTYPO_INPUT", default_value = "-")]
    input: String,
    /// Output path, or - for stdout.
    #[arg(long, env = "MULTYPO_OUTPUT", default_value = "-")]
    output: String,
    /// Write a JSONL event log here.
    #[arg(long, env = "MULTYPO_EVENTS_OUT")]
    events_out: Option<PathBuf>,
    /// Write the run report here instead of stderr.
    #[arg(long, env = "MULTYPO_REPORT_OUT")]
    report_out: Option<PathBuf>,
    /// Load layouts from this directory instead of the builtin set.
    #[arg(long, env = "MULTYPO_LAYOUTS_DIR")]
    layouts_dir: Option<PathBuf>,
    /// Load `<lang>.ignore` files from this directory instead of the builtin set.
    #[arg(long, env = "MULTYPO_IGNORE_DIR")]
    ignore_dir: Option<PathBuf>,
    /// Retry budget per document before reporting a shortfall.
    #[arg(long, env = "MULTYPO_MAX_RETRIES", default_value_t = DEFAULT_MAX_RETRIES)]
    max_retries: u32,
    /// Worker pool size. Output does not depend on it.
    #[arg(long, env = "MULTYPO_WORKERS", default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// Samples per distribution check.
    #[arg(long, env = "MULTYPO_SAMPLES", default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, env = "MULTYPO_SEED", default_value_t = 0)]
    seed: u64,
    /// Language for the word-bias check.
    #[arg(long, env = "MULTYPO_LANG", default_value = "eng_Latn")]
    lang: LanguageId,
    /// Sentence for the word-bias check.
    #[arg(long, env = "MULTYPO_SENTENCE", default_value = "hi there")]
    sentence: String,
    /// Audit this JSONL event log against the layout constraints.
    #[arg(long, env = "MULTYPO_EVENTS_IN")]
    events_in: Option<PathBuf>,
    /// Write the report as JSON here in addition to the text summary.
    #[arg(long, env = "MULTYPO_REPORT_OUT")]
    report_out: Option<PathBuf>,
    #[arg(long, env = "MULTYPO_LAYOUTS_DIR")]
    layouts_dir: Option<PathBuf>,
    #[arg(long, env = "MULTYPO_IGNORE_DIR")]
    ignore_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are success, everything else is usage
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    let outcome = match cli.command {
        Command::Corrupt(args) => run_corrupt(args),
        Command::Validate(args) => run_validate(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::RateOutOfRange(_) | Error::ZeroRetries | Error::UnknownLanguage(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn load_registry(dir: &Option<PathBuf>) -> Result<LayoutRegistry, Error> {
    match dir {
        Some(path) => LayoutRegistry::load(path),
        None => Ok(LayoutRegistry::builtin()),
    }
}

fn load_ignore(lang: LanguageId, dir: &Option<PathBuf>) -> Result<IgnoreSet, Error> {
    match dir {
        Some(path) => IgnoreSet::load(lang, &path.join(format!("{}.ignore", lang.code()))),
        None => Ok(IgnoreSet::builtin(lang)),
    }
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>, Error> {
    if path == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>, Error> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(std::io::stdout())))
    } else {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

fn create_file(path: &Path) -> Result<BufWriter<File>, Error> {
    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(BufWriter::new(file))
}

fn run_corrupt(args: CorruptArgs) -> Result<ExitCode, Error> {
    let format = match args.format.as_str() {
        "plain" => InputFormat::Plain,
        "records" => {
            let field = args.field.clone().ok_or_else(|| {
                Error::BadRecord {
                    line: 0,
                    detail: "--field is required with --format records".to_string(),
                }
            })?;
            InputFormat::Records { field }
        }
        other => {
            eprintln!("error: unknown format '{other}' (expected plain or records)");
            return Ok(ExitCode::from(EXIT_USAGE));
        }
    };
    let config = CorruptionConfig::new(args.lang, args.rate, args.seed, args.mode)?
        .with_max_retries(args.max_retries)?;
    let registry = load_registry(&args.layouts_dir)?;
    let ignore = load_ignore(args.lang, &args.ignore_dir)?;

    let reader = open_input(&args.input)?;
    let writer = open_output(&args.output)?;
    let events_writer = args.events_out.as_deref().map(create_file).transpose()?;

    let report = process_corpus(
        reader,
        writer,
        events_writer,
        &format,
        &config,
        &registry,
        &ignore,
        args.workers,
    )?;

    match &args.report_out {
        Some(path) => {
            let mut w = create_file(path)?;
            serde_json::to_writer_pretty(&mut w, &report)
                .map_err(|e| Error::io(path.display().to_string(), e.into()))?;
            writeln!(w).map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        None => eprint!("{}", report.render_text()),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let registry = load_registry(&args.layouts_dir)?;
    let ignore = load_ignore(args.lang, &args.ignore_dir)?;

    let mut report = ValidationReport::default();
    report.extend(validate_operation_mix(args.samples, args.seed)?);
    for length in [2, 3, 4, 10] {
        report.extend(validate_position_distribution(
            length,
            args.samples,
            args.seed.wrapping_add(length as u64),
        )?);
    }
    report.extend(validate_word_length_bias(
        &args.sentence,
        args.samples,
        args.seed.wrapping_add(100),
        args.lang,
        &registry,
        &ignore,
    )?);
    if let Some(path) = &args.events_in {
        let mut log_text = String::new();
        File::open(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?
            .read_to_string(&mut log_text)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let sets: HashMap<LanguageId, IgnoreSet> = match &args.ignore_dir {
            None => builtin_ignore_sets(),
            Some(dir) => LanguageId::all()
                .map(|l| IgnoreSet::load(l, &dir.join(format!("{}.ignore", l.code()))).map(|s| (l, s)))
                .collect::<Result<_, _>>()?,
        };
        report.extend(validate_constraints(&log_text, &registry, &sets)?);
    }

    print!("{}", report.render_text());
    if let Some(path) = &args.report_out {
        let mut w = create_file(path)?;
        serde_json::to_writer_pretty(&mut w, &report)
            .map_err(|e| Error::io(path.display().to_string(), e.into()))?;
        writeln!(w).map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DATA)
    })
}
